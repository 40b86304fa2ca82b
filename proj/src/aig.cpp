#include "qfun/aig.hpp"

#include "qfun/error.hpp"

#include <algorithm>
#include <ostream>
#include <unordered_set>

namespace qfun {

namespace {

std::uint64_t and_key(NodeRef a, NodeRef b) {
    return (static_cast<std::uint64_t>(a.raw()) << 32) | b.raw();
}

} // namespace

Aig::Aig() { nodes_.push_back(Node{Kind::ConstTrue, 0, {}, {}}); }

Var Aig::new_var(std::string name) {
    Var v = static_cast<Var>(var_names_.size());
    var_ids_.emplace(name, v);
    var_names_.push_back(std::move(name));
    var_node_.push_back(0);
    return v;
}

Var Aig::var_named(const std::string& name) {
    if (auto v = find_var(name)) return *v;
    return new_var(name);
}

std::optional<Var> Aig::find_var(const std::string& name) const {
    auto it = var_ids_.find(name);
    if (it == var_ids_.end()) return std::nullopt;
    return it->second;
}

Var Aig::fresh_copy(Var original) {
    std::string name;
    do {
        name = var_names_.at(original) + "'" + std::to_string(++fresh_counter_);
    } while (var_ids_.count(name) != 0);
    return new_var(std::move(name));
}

NodeRef Aig::mk_var(Var v) {
    if (v >= var_node_.size()) throw Error("mk_var: unknown variable id " + std::to_string(v));
    if (var_node_[v] == 0) {
        var_node_[v] = static_cast<std::uint32_t>(nodes_.size());
        nodes_.push_back(Node{Kind::Variable, v, {}, {}});
    }
    return NodeRef(var_node_[v], false);
}

NodeRef Aig::mk_and(NodeRef a, NodeRef b) {
    if (a.raw() > b.raw()) std::swap(a, b);
    // Constants sort first, so only `a` can be one.
    if (a.is_false()) return kFalse;
    if (a.is_true()) return b;
    if (a == b) return a;
    if (a == !b) return kFalse;

    const auto key = and_key(a, b);
    if (auto it = and_index_.find(key); it != and_index_.end()) return NodeRef(it->second, false);
    const auto index = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back(Node{Kind::And, 0, a, b});
    and_index_.emplace(key, index);
    return NodeRef(index, false);
}

NodeRef Aig::mk_xor(NodeRef a, NodeRef b) { return mk_or(mk_and(a, !b), mk_and(!a, b)); }

NodeRef Aig::mk_ite(NodeRef c, NodeRef t, NodeRef e) { return mk_or(mk_and(c, t), mk_and(!c, e)); }

NodeRef Aig::mk_and(std::span<const NodeRef> xs) {
    NodeRef acc = kTrue;
    for (NodeRef x : xs) acc = mk_and(acc, x);
    return acc;
}

NodeRef Aig::mk_or(std::span<const NodeRef> xs) {
    NodeRef acc = kFalse;
    for (NodeRef x : xs) acc = mk_or(acc, x);
    return acc;
}

std::vector<std::uint32_t> Aig::cone(std::span<const NodeRef> roots) const {
    std::vector<std::uint32_t> out;
    std::unordered_set<std::uint32_t> seen;
    std::vector<std::uint32_t> stack;
    for (NodeRef r : roots) {
        if (!r.is_const() && seen.insert(r.index()).second) stack.push_back(r.index());
    }
    while (!stack.empty()) {
        const auto i = stack.back();
        stack.pop_back();
        out.push_back(i);
        const Node& n = nodes_[i];
        if (n.kind != Kind::And) continue;
        for (NodeRef c : {n.left, n.right}) {
            if (seen.insert(c.index()).second) stack.push_back(c.index());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

NodeRef Aig::substitute(NodeRef root, const Substitution& sigma) {
    if (root.is_const()) return root;
    const auto order = cone(std::span(&root, 1));
    std::unordered_map<std::uint32_t, NodeRef> image;
    image.reserve(order.size());
    auto mapped = [&](NodeRef r) {
        if (r.is_const()) return r;
        NodeRef m = image.at(r.index());
        return r.complemented() ? !m : m;
    };
    for (auto i : order) {
        const Node& n = nodes_[i];
        NodeRef result;
        if (n.kind == Kind::Variable) {
            auto it = sigma.find(n.var);
            result = it == sigma.end() ? NodeRef(i, false) : it->second;
        } else {
            // nodes_ may grow inside mk_and; copy the children first.
            const NodeRef l = n.left, r = n.right;
            result = mk_and(mapped(l), mapped(r));
        }
        image.emplace(i, result);
    }
    return mapped(root);
}

NodeRef Aig::apply(NodeRef root, const Assignment& tau) {
    Substitution sigma;
    for (const auto& [v, value] : tau) sigma.emplace(v, value ? kTrue : kFalse);
    return substitute(root, sigma);
}

bool Aig::evaluate(NodeRef root, const Assignment& tau) const {
    const auto order = cone(std::span(&root, 1));
    std::unordered_map<std::uint32_t, bool> value;
    value.reserve(order.size());
    auto lit = [&](NodeRef r) { return (r.is_const() || value.at(r.index())) != r.complemented(); };
    for (auto i : order) {
        const Node& n = nodes_[i];
        if (n.kind == Kind::Variable) {
            auto v = tau.find(n.var);
            if (!v) throw UnassignedVariable("evaluate: variable '" + var_names_[n.var] + "' is unassigned");
            value.emplace(i, *v);
        } else {
            value.emplace(i, lit(n.left) && lit(n.right));
        }
    }
    return lit(root);
}

std::vector<Var> Aig::collect_vars(NodeRef root) const {
    std::vector<Var> vars;
    for (auto i : cone(std::span(&root, 1))) {
        if (nodes_[i].kind == Kind::Variable) vars.push_back(nodes_[i].var);
    }
    std::sort(vars.begin(), vars.end());
    return vars;
}

void Aig::dump(std::ostream& os, NodeRef root) const {
    std::unordered_set<std::uint32_t> printed;
    auto rec = [&](auto&& self, NodeRef r, int depth) -> void {
        os << std::string(2 * depth, ' ') << (r.complemented() ? "!" : "");
        const Node& n = nodes_[r.index()];
        switch (n.kind) {
        case Kind::ConstTrue: os << "TRUE\n"; return;
        case Kind::Variable: os << var_names_[n.var] << '\n'; return;
        case Kind::And: break;
        }
        os << "and#" << r.index();
        if (!printed.insert(r.index()).second) {
            os << " (shared)\n";
            return;
        }
        os << '\n';
        self(self, n.left, depth + 1);
        self(self, n.right, depth + 1);
    };
    rec(rec, root, 0);
}

CompiledFormula::CompiledFormula(const Aig& aig, NodeRef root) {
    const auto order = aig.cone(std::span(&root, 1));
    std::unordered_map<std::uint32_t, std::uint32_t> slot_of;
    slot_of.reserve(order.size());
    auto encode = [&](NodeRef r) {
        const std::uint32_t slot = r.is_const() ? 0 : slot_of.at(r.index());
        return (slot << 1) | (r.complemented() ? 1u : 0u);
    };
    for (auto i : order) {
        const auto& n = aig.node(i);
        Step s{};
        if (n.kind == Aig::Kind::Variable) {
            s.is_var = true;
            s.var = n.var;
        } else {
            s.is_var = false;
            s.left = encode(n.left);
            s.right = encode(n.right);
        }
        steps_.push_back(s);
        slot_of.emplace(i, static_cast<std::uint32_t>(steps_.size()));
    }
    root_ = encode(root);
    slots_.assign(steps_.size() + 1, 0);
    slots_[0] = 1;
}

bool CompiledFormula::operator()(const std::vector<char>& values) const {
    auto lit = [&](std::uint32_t code) { return (slots_[code >> 1] != 0) != ((code & 1u) != 0); };
    for (std::size_t k = 0; k < steps_.size(); ++k) {
        const Step& s = steps_[k];
        slots_[k + 1] = s.is_var ? values.at(s.var) : static_cast<char>(lit(s.left) && lit(s.right));
    }
    return lit(root_);
}

} // namespace qfun
