#pragma once

// Test-only generators and reference evaluators. Nothing here calls into the
// code paths it is used to check, except for building AIGs.

#include "qfun/aig.hpp"
#include "qfun/prefix.hpp"

#include <memory>
#include <random>
#include <vector>

namespace qfun::test {

/// Plain expression tree evaluated by direct recursion.
struct Expr {
    enum Op { Const, Var, Not, And, Or, Xor, Ite } op = Const;
    bool value = false;
    std::size_t var = 0;
    std::vector<std::shared_ptr<Expr>> kids;

    bool eval(const std::vector<char>& x) const {
        switch (op) {
        case Const: return value;
        case Var: return x[var] != 0;
        case Not: return !kids[0]->eval(x);
        case And: return kids[0]->eval(x) && kids[1]->eval(x);
        case Or: return kids[0]->eval(x) || kids[1]->eval(x);
        case Xor: return kids[0]->eval(x) != kids[1]->eval(x);
        case Ite: return kids[0]->eval(x) ? kids[1]->eval(x) : kids[2]->eval(x);
        }
        return false;
    }

    NodeRef build(Aig& aig, const std::vector<qfun::Var>& vars) const {
        switch (op) {
        case Const: return value ? kTrue : kFalse;
        case Var: return aig.mk_var(vars[var]);
        case Not: return !kids[0]->build(aig, vars);
        case And: return aig.mk_and(kids[0]->build(aig, vars), kids[1]->build(aig, vars));
        case Or: return aig.mk_or(kids[0]->build(aig, vars), kids[1]->build(aig, vars));
        case Xor: return aig.mk_xor(kids[0]->build(aig, vars), kids[1]->build(aig, vars));
        case Ite:
            return aig.mk_ite(kids[0]->build(aig, vars), kids[1]->build(aig, vars), kids[2]->build(aig, vars));
        }
        return kFalse;
    }
};

inline std::shared_ptr<Expr> random_expr(std::mt19937& rng, std::size_t num_vars, int depth) {
    auto e = std::make_shared<Expr>();
    std::uniform_int_distribution<int> pick(0, 9);
    const int r = depth <= 0 ? (pick(rng) < 9 ? 1 : 0) : pick(rng);
    if (r == 0) {
        e->op = Expr::Const;
        e->value = (rng() & 1u) != 0;
    } else if (r <= 2) {
        e->op = Expr::Var;
        e->var = std::uniform_int_distribution<std::size_t>(0, num_vars - 1)(rng);
    } else {
        static constexpr Expr::Op ops[] = {Expr::Not, Expr::And, Expr::And, Expr::Or, Expr::Xor, Expr::Ite, Expr::Or};
        e->op = ops[std::uniform_int_distribution<int>(0, 6)(rng)];
        const int arity = e->op == Expr::Not ? 1 : e->op == Expr::Ite ? 3 : 2;
        for (int i = 0; i < arity; ++i) e->kids.push_back(random_expr(rng, num_vars, depth - 1));
    }
    return e;
}

/// Invokes f(values) for every assignment of n variables (dense vector).
template <class F>
void for_all_assignments(std::size_t n, F&& f) {
    std::vector<char> x(n);
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
        for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<char>((bits >> i) & 1u);
        f(x);
    }
}

inline Assignment to_assignment(const std::vector<qfun::Var>& vars, const std::vector<char>& x) {
    Assignment a;
    for (std::size_t i = 0; i < vars.size(); ++i) a.set(vars[i], x[i] != 0);
    return a;
}

inline std::vector<qfun::Var> make_vars(Aig& aig, std::size_t n, const std::string& base = "v") {
    std::vector<qfun::Var> vars;
    for (std::size_t i = 0; i < n; ++i) vars.push_back(aig.new_var(base + std::to_string(aig.num_vars())));
    return vars;
}

/// Random closed prenex QBF: up to `max_blocks` alternating blocks over up to
/// `max_vars` variables and a random AIG matrix of at most `max_gates` ANDs.
inline Game random_qbf(std::mt19937& rng, Aig& aig, std::size_t max_blocks = 3, std::size_t max_vars = 10,
                       std::size_t max_gates = 40) {
    const auto num_vars = std::uniform_int_distribution<std::size_t>(1, max_vars)(rng);
    const auto vars = make_vars(aig, num_vars, "r");
    const auto num_blocks = std::uniform_int_distribution<std::size_t>(1, std::min(max_blocks, num_vars))(rng);

    // Cut points split vars into num_blocks non-empty blocks.
    std::vector<std::size_t> cuts;
    std::vector<std::size_t> positions(num_vars - 1);
    for (std::size_t i = 0; i < positions.size(); ++i) positions[i] = i + 1;
    std::shuffle(positions.begin(), positions.end(), rng);
    cuts.assign(positions.begin(), positions.begin() + static_cast<std::ptrdiff_t>(num_blocks - 1));
    std::sort(cuts.begin(), cuts.end());
    cuts.push_back(num_vars);

    Quantifier q = (rng() & 1u) ? Quantifier::Exists : Quantifier::Forall;
    std::vector<Block> blocks;
    std::size_t start = 0;
    for (auto cut : cuts) {
        blocks.push_back(Block{q, std::vector<qfun::Var>(vars.begin() + static_cast<std::ptrdiff_t>(start),
                                                         vars.begin() + static_cast<std::ptrdiff_t>(cut))});
        q = opponent(q);
        start = cut;
    }

    std::vector<NodeRef> pool;
    for (auto v : vars) pool.push_back(aig.mk_var(v));
    const auto gates = std::uniform_int_distribution<std::size_t>(1, max_gates)(rng);
    NodeRef last = pool.front();
    for (std::size_t i = 0; i < gates; ++i) {
        std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
        NodeRef a = pool[pick(rng)];
        NodeRef b = pool[pick(rng)];
        if (rng() & 1u) a = !a;
        if (rng() & 1u) b = !b;
        last = aig.mk_and(a, b);
        pool.push_back(last);
    }
    if (rng() & 1u) last = !last;
    return Game{Prefix(std::move(blocks)), last};
}

/// forall u w exists x y. phi from the worked example:
/// (u -> ((-w <-> x) & (w <-> y))) & (-u -> ((w <-> x) & (-w <-> y))).
struct WorkedGame {
    qfun::Var u, w, x, y;
    NodeRef phi;
    Game game;
};

inline WorkedGame worked_game(Aig& aig) {
    WorkedGame e{};
    e.u = aig.var_named("u");
    e.w = aig.var_named("w");
    e.x = aig.var_named("x");
    e.y = aig.var_named("y");
    const NodeRef u = aig.mk_var(e.u), w = aig.mk_var(e.w), x = aig.mk_var(e.x), y = aig.mk_var(e.y);
    const NodeRef left = aig.mk_implies(u, aig.mk_and(aig.mk_equiv(!w, x), aig.mk_equiv(w, y)));
    const NodeRef right = aig.mk_implies(!u, aig.mk_and(aig.mk_equiv(w, x), aig.mk_equiv(!w, y)));
    e.phi = aig.mk_and(left, right);
    e.game = Game{Prefix({Block{Quantifier::Forall, {e.u, e.w}}, Block{Quantifier::Exists, {e.x, e.y}}}), e.phi};
    return e;
}

} // namespace qfun::test
