#include "qfun/oracle.hpp"

#include "qfun/error.hpp"

#include <algorithm>

namespace qfun::oracle {

namespace {

class Expander {
public:
    Expander(const Aig& aig, const Game& g) : prefix_(g.prefix), formula_(aig, g.matrix) {
        values_.assign(aig.num_vars(), 0);
    }

    void fix(const Assignment& tau) {
        for (const auto& [v, value] : tau) values_.at(v) = value ? 1 : 0;
    }

    bool run() { return expand(0, 0); }

private:
    bool expand(std::size_t block, std::size_t pos) {
        const auto& blocks = prefix_.blocks();
        if (block == blocks.size()) return formula_(values_);
        const auto& b = blocks[block];
        if (pos == b.vars.size()) return expand(block + 1, 0);
        const bool exists = b.quantifier == Quantifier::Exists;
        for (char value : {char{0}, char{1}}) {
            values_[b.vars[pos]] = value;
            const bool r = expand(block, pos + 1);
            if (r == exists) return r;  // short-circuit
        }
        return !exists;
    }

    const Prefix& prefix_;
    CompiledFormula formula_;
    std::vector<char> values_;
};

void check_cap(std::size_t n, std::size_t cap) {
    if (n > cap) throw TooLarge("oracle: " + std::to_string(n) + " variables exceed the cap of " + std::to_string(cap));
}

/// Value ("exists wins") of `g` with its free variables fixed by `tau`.
bool eval_under(const Aig& aig, const Game& g, const Assignment& tau) {
    Expander e(aig, g);
    e.fix(tau);
    return e.run();
}

} // namespace

bool brute_force_eval(const Aig& aig, const Game& g, std::size_t cap) {
    check_cap(g.prefix.num_vars(), cap);
    if (!is_closed(aig, g)) throw Error("oracle: formula is not closed");
    return eval_under(aig, g, {});
}

bool is_winning_move(const Aig& aig, const MultiGame& mg, const Assignment& tau, std::size_t cap) {
    const bool exists = mg.quantifier == Quantifier::Exists;
    return std::all_of(mg.subgames.begin(), mg.subgames.end(), [&](const Game& g) {
        check_cap(mg.top_vars.size() + g.prefix.num_vars(), cap);
        return eval_under(aig, g, tau) == exists;
    });
}

Verdict brute_force_winning_move(const Aig& aig, const MultiGame& mg, std::size_t cap) {
    const auto n = mg.top_vars.size();
    check_cap(n, cap);
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
        Assignment tau;
        for (std::size_t i = 0; i < n; ++i) tau.set(mg.top_vars[i], ((bits >> (n - 1 - i)) & 1u) != 0);
        if (is_winning_move(aig, mg, tau, cap)) return Verdict::winning(std::move(tau));
    }
    return Verdict::no_winning_move();
}

MultiGame as_multigame(const Game& g) {
    if (g.propositional()) throw Error("as_multigame: game has no quantifier block");
    return MultiGame{g.first_quantifier(), g.first_block(), {Game{g.prefix.drop_front(), g.matrix}}};
}

} // namespace qfun::oracle
