#pragma once

#include "qfun/assignment.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace qfun {

/// Possibly-complemented reference into an Aig node table. Node 0 is the
/// constant TRUE; FALSE is its complement.
class NodeRef {
public:
    constexpr NodeRef() = default;
    constexpr NodeRef(std::uint32_t index, bool complemented)
        : raw_((index << 1) | (complemented ? 1u : 0u)) {}

    static constexpr NodeRef from_raw(std::uint32_t raw) {
        NodeRef r;
        r.raw_ = raw;
        return r;
    }

    constexpr std::uint32_t index() const { return raw_ >> 1; }
    constexpr bool complemented() const { return (raw_ & 1u) != 0; }
    constexpr std::uint32_t raw() const { return raw_; }

    constexpr NodeRef operator!() const { return from_raw(raw_ ^ 1u); }

    constexpr bool is_const() const { return index() == 0; }
    constexpr bool is_true() const { return raw_ == 0; }
    constexpr bool is_false() const { return raw_ == 1; }

    friend constexpr bool operator==(NodeRef, NodeRef) = default;
    friend constexpr auto operator<=>(NodeRef, NodeRef) = default;

private:
    std::uint32_t raw_ = 0;
};

constexpr NodeRef kTrue = NodeRef(0, false);
constexpr NodeRef kFalse = NodeRef(0, true);

constexpr NodeRef complement(NodeRef r) { return !r; }

/// Variable-to-formula map applied simultaneously by Aig::substitute.
using Substitution = std::unordered_map<Var, NodeRef>;

class Aig;

/// Flattened cone of one root for repeated evaluation under dense
/// assignments (`values[v]` is the value of variable v).
class CompiledFormula {
public:
    CompiledFormula(const Aig& aig, NodeRef root);
    bool operator()(const std::vector<char>& values) const;

private:
    struct Step {
        bool is_var;
        Var var;
        std::uint32_t left, right;  // slot << 1 | complement
    };
    std::vector<Step> steps_;
    std::uint32_t root_ = 0;  // slot << 1 | complement; slot 0 is TRUE
    mutable std::vector<char> slots_;
};

/// Hash-consed And-Inverter graph. Nodes are append-only; children always
/// precede their parent. AND children are stored ordered (smaller raw first).
class Aig {
public:
    enum class Kind : std::uint8_t { ConstTrue, Variable, And };

    struct Node {
        Kind kind = Kind::ConstTrue;
        Var var = 0;
        NodeRef left;
        NodeRef right;
    };

    Aig();

    // Variable registry.
    Var new_var(std::string name);
    /// Variable named `name`, creating it on first use.
    Var var_named(const std::string& name);
    std::optional<Var> find_var(const std::string& name) const;
    /// Fresh variable whose name is derived from `original`.
    Var fresh_copy(Var original);
    const std::string& var_name(Var v) const { return var_names_.at(v); }
    std::size_t num_vars() const { return var_names_.size(); }

    NodeRef mk_var(Var v);
    NodeRef mk_and(NodeRef a, NodeRef b);
    NodeRef mk_or(NodeRef a, NodeRef b) { return !mk_and(!a, !b); }
    NodeRef mk_xor(NodeRef a, NodeRef b);
    NodeRef mk_equiv(NodeRef a, NodeRef b) { return !mk_xor(a, b); }
    NodeRef mk_implies(NodeRef a, NodeRef b) { return mk_or(!a, b); }
    NodeRef mk_ite(NodeRef c, NodeRef t, NodeRef e);
    NodeRef mk_and(std::span<const NodeRef> xs);
    NodeRef mk_or(std::span<const NodeRef> xs);

    NodeRef substitute(NodeRef root, const Substitution& sigma);
    /// Substitution of constants; a shorthand for substitute().
    NodeRef apply(NodeRef root, const Assignment& tau);

    bool evaluate(NodeRef root, const Assignment& tau) const;

    std::vector<Var> collect_vars(NodeRef root) const;

    /// Non-constant nodes reachable from `roots`, ascending (children first).
    std::vector<std::uint32_t> cone(std::span<const NodeRef> roots) const;

    const Node& node(std::uint32_t index) const { return nodes_[index]; }
    std::size_t size() const { return nodes_.size(); }
    bool is_var(NodeRef r) const { return nodes_[r.index()].kind == Kind::Variable; }
    bool is_and(NodeRef r) const { return nodes_[r.index()].kind == Kind::And; }

    /// Indented human-readable dump of the DAG under `root`.
    void dump(std::ostream& os, NodeRef root) const;

private:
    std::vector<Node> nodes_;
    std::unordered_map<std::uint64_t, std::uint32_t> and_index_;
    std::vector<std::uint32_t> var_node_;  // 0 = not yet materialized
    std::vector<std::string> var_names_;
    std::unordered_map<std::string, Var> var_ids_;
    std::uint32_t fresh_counter_ = 0;
};

} // namespace qfun
