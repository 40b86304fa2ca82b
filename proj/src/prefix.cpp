#include "qfun/prefix.hpp"

#include "qfun/error.hpp"

#include <algorithm>
#include <unordered_set>

namespace qfun {

bool Assignment::get(Var v) const {
    auto it = values_.find(v);
    if (it == values_.end()) throw UnassignedVariable("assignment has no value for variable " + std::to_string(v));
    return it->second;
}

std::optional<bool> Assignment::find(Var v) const {
    auto it = values_.find(v);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

std::vector<Var> Assignment::domain() const {
    std::vector<Var> d;
    d.reserve(values_.size());
    for (const auto& [v, _] : values_) d.push_back(v);
    return d;
}

bool Assignment::covers(std::span<const Var> vars) const {
    return std::all_of(vars.begin(), vars.end(), [&](Var v) { return contains(v); });
}

Assignment restrict(const Assignment& tau, std::span<const Var> vars) {
    Assignment out;
    for (Var v : vars) {
        if (auto value = tau.find(v)) out.set(v, *value);
    }
    return out;
}

const char* to_string(Quantifier q) { return q == Quantifier::Exists ? "exists" : "forall"; }

Prefix::Prefix(std::vector<Block> blocks) {
    std::unordered_set<Var> bound;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (blocks[i].vars.empty()) throw InvalidPrefix("empty quantifier block");
        if (i > 0 && blocks[i].quantifier == blocks[i - 1].quantifier)
            throw InvalidPrefix("adjacent blocks share a quantifier");
        for (Var v : blocks[i].vars) {
            if (!bound.insert(v).second) throw InvalidPrefix("variable bound twice: " + std::to_string(v));
        }
    }
    blocks_ = std::move(blocks);
}

void Prefix::push(Quantifier q, std::span<const Var> vars) {
    if (vars.empty()) return;
    for (Var v : vars) {
        if (binds(v)) throw InvalidPrefix("variable bound twice: " + std::to_string(v));
    }
    if (!blocks_.empty() && blocks_.back().quantifier == q) {
        const auto dup = std::unordered_set<Var>(vars.begin(), vars.end()).size() != vars.size();
        if (dup) throw InvalidPrefix("variable bound twice within a block");
        blocks_.back().vars.insert(blocks_.back().vars.end(), vars.begin(), vars.end());
        return;
    }
    if (std::unordered_set<Var>(vars.begin(), vars.end()).size() != vars.size())
        throw InvalidPrefix("variable bound twice within a block");
    blocks_.push_back(Block{q, std::vector<Var>(vars.begin(), vars.end())});
}

bool Prefix::binds(Var v) const { return level(v).has_value(); }

std::optional<std::size_t> Prefix::level(Var v) const {
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        const auto& vs = blocks_[i].vars;
        if (std::find(vs.begin(), vs.end(), v) != vs.end()) return i + 1;
    }
    return std::nullopt;
}

std::vector<Var> Prefix::domain(Var v) const {
    const auto lev = level(v);
    if (!lev) throw InvalidPrefix("domain of unbound variable " + std::to_string(v));
    std::vector<Var> dom;
    for (std::size_t i = 0; i + 1 < *lev; ++i) dom.insert(dom.end(), blocks_[i].vars.begin(), blocks_[i].vars.end());
    return dom;
}

std::vector<Var> Prefix::vars() const {
    std::vector<Var> all;
    for (const auto& b : blocks_) all.insert(all.end(), b.vars.begin(), b.vars.end());
    return all;
}

std::size_t Prefix::num_vars() const {
    std::size_t n = 0;
    for (const auto& b : blocks_) n += b.vars.size();
    return n;
}

Prefix Prefix::drop_front(std::size_t n) const {
    Prefix p;
    if (n < blocks_.size()) p.blocks_.assign(blocks_.begin() + static_cast<std::ptrdiff_t>(n), blocks_.end());
    return p;
}

bool is_closed(const Aig& aig, const Game& g) {
    const auto bound = g.prefix.vars();
    const std::unordered_set<Var> set(bound.begin(), bound.end());
    const auto used = aig.collect_vars(g.matrix);
    return std::all_of(used.begin(), used.end(), [&](Var v) { return set.count(v) != 0; });
}

void MultiGame::validate() const {
    const std::unordered_set<Var> top(top_vars.begin(), top_vars.end());
    for (const auto& g : subgames) {
        if (g.propositional()) continue;
        if (g.first_quantifier() != opponent(quantifier))
            throw InvalidPrefix("sub-game does not begin with the opponent's block");
        for (Var v : g.prefix.vars()) {
            if (top.count(v) != 0) throw InvalidPrefix("sub-game rebinds a top-level variable");
        }
    }
}

bool MultiGame::all_propositional() const {
    return std::all_of(subgames.begin(), subgames.end(), [](const Game& g) { return g.propositional(); });
}

std::variant<NodeRef, Game> apply_to_game(Aig& aig, const Game& g, const Assignment& tau) {
    if (g.propositional()) throw PartialBlock("apply_to_game: game has no quantifier block");
    const auto& first = g.first_block();
    if (!tau.covers(first) || tau.size() != first.size())
        throw PartialBlock("apply_to_game: assignment must cover exactly the first block");
    const NodeRef matrix = aig.apply(g.matrix, tau);
    if (g.prefix.num_blocks() == 1) return matrix;
    return Game{g.prefix.drop_front(), matrix};
}

} // namespace qfun
