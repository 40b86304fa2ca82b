#pragma once

#include "qfun/aig.hpp"
#include "qfun/assignment.hpp"

#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace qfun {

enum class Quantifier : std::uint8_t { Exists, Forall };

constexpr Quantifier opponent(Quantifier q) {
    return q == Quantifier::Exists ? Quantifier::Forall : Quantifier::Exists;
}

const char* to_string(Quantifier q);

struct Block {
    Quantifier quantifier;
    std::vector<Var> vars;

    friend bool operator==(const Block&, const Block&) = default;
};

/// Alternating sequence of pairwise-disjoint, non-empty quantifier blocks.
class Prefix {
public:
    Prefix() = default;
    /// Validates alternation, disjointness and non-emptiness.
    explicit Prefix(std::vector<Block> blocks);

    /// Appends a block, merging with the last one when the quantifier repeats.
    /// Empty `vars` is a no-op.
    void push(Quantifier q, std::span<const Var> vars);

    const std::vector<Block>& blocks() const { return blocks_; }
    std::size_t num_blocks() const { return blocks_.size(); }
    bool empty() const { return blocks_.empty(); }
    const Block& block(std::size_t i) const { return blocks_.at(i); }

    bool binds(Var v) const;
    /// 1-based block index of `v`; nullopt when unbound.
    std::optional<std::size_t> level(Var v) const;
    /// Union of the blocks strictly before the block of `v`.
    std::vector<Var> domain(Var v) const;
    std::vector<Var> vars() const;
    std::size_t num_vars() const;

    /// Prefix without its first `n` blocks.
    Prefix drop_front(std::size_t n = 1) const;

    friend bool operator==(const Prefix&, const Prefix&) = default;

private:
    std::vector<Block> blocks_;
};

/// Prenex QBF: prefix plus matrix. An empty prefix denotes a propositional
/// formula.
struct Game {
    Prefix prefix;
    NodeRef matrix;

    bool propositional() const { return prefix.empty(); }
    Quantifier first_quantifier() const { return prefix.block(0).quantifier; }
    const std::vector<Var>& first_block() const { return prefix.block(0).vars; }
};

/// True iff every variable of the matrix is bound by the prefix.
bool is_closed(const Aig& aig, const Game& g);

/// Q X.{Phi_1..Phi_n}; each sub-game is propositional or starts with the
/// opponent of `quantifier`.
struct MultiGame {
    Quantifier quantifier = Quantifier::Exists;
    std::vector<Var> top_vars;
    std::vector<Game> subgames;

    /// Throws InvalidPrefix if a sub-game does not start with the opponent or
    /// rebinds a top variable.
    void validate() const;
    bool all_propositional() const;
};

/// (Q X. Phi)[tau] for a full assignment `tau` of the first block. Returns
/// the residual matrix when no blocks remain.
std::variant<NodeRef, Game> apply_to_game(Aig& aig, const Game& g, const Assignment& tau);

} // namespace qfun
