#pragma once

#include "qfun/budget.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace qfun::sat {

/// Literal over 0-based solver variables: 2*var + sign.
struct Lit {
    std::uint32_t code = 0;

    static Lit pos(std::uint32_t v) { return Lit{v << 1}; }
    static Lit neg(std::uint32_t v) { return Lit{(v << 1) | 1u}; }
    /// DIMACS integer (non-zero) to literal.
    static Lit from_dimacs(int x) { return x > 0 ? pos(static_cast<std::uint32_t>(x - 1)) : neg(static_cast<std::uint32_t>(-x - 1)); }

    std::uint32_t var() const { return code >> 1; }
    bool negative() const { return (code & 1u) != 0; }
    Lit operator~() const { return Lit{code ^ 1u}; }
    friend bool operator==(Lit, Lit) = default;
    friend auto operator<=>(Lit, Lit) = default;
};

/// Conflict-driven clause-learning solver. Branching is fully deterministic:
/// VSIDS with lowest-index tie-break and saved phases. Initial phases are
/// false unless seeded.
class CdclSolver {
public:
    explicit CdclSolver(std::uint32_t num_vars = 0);

    void reserve_vars(std::uint32_t n);
    std::uint32_t num_vars() const { return static_cast<std::uint32_t>(assigns_.size()); }

    /// Adds a clause at decision level 0. Returns false once the clause set is
    /// known to be unsatisfiable.
    bool add_clause(std::span<const Lit> lits);

    /// Initial phase of every variable drawn from a hash of (seed, var).
    void seed_phases(std::uint64_t seed);

    /// true = SAT, false = UNSAT. Throws ResourceLimit via `budget`.
    bool solve(const Budget& budget = {});

    /// Model value after a SAT answer.
    bool model_value(std::uint32_t v) const { return model_.at(v) != 0; }

    std::uint64_t conflicts() const { return conflicts_; }
    std::uint64_t decisions() const { return decisions_; }

private:
    static constexpr int kUndef = -1;
    static constexpr std::uint32_t kNoReason = UINT32_MAX;

    struct Clause {
        std::vector<Lit> lits;
        bool learnt = false;
        bool deleted = false;
        double activity = 0.0;
    };
    struct Watcher {
        std::uint32_t cref;
        Lit blocker;
    };

    int value(Lit l) const {
        const int a = assigns_[l.var()];
        return a == kUndef ? kUndef : (a ^ static_cast<int>(l.negative()));
    }
    std::uint32_t level() const { return static_cast<std::uint32_t>(trail_lim_.size()); }

    void enqueue(Lit l, std::uint32_t reason);
    std::uint32_t propagate();  // conflicting clause or kNoReason
    void analyze(std::uint32_t conflict, std::vector<Lit>& learnt, std::uint32_t& backtrack_level);
    void backtrack(std::uint32_t lvl);
    std::uint32_t attach(std::vector<Lit> lits, bool learnt);
    void reduce_learnts();
    void rebuild_watches();

    void bump_var(std::uint32_t v);
    void bump_clause(Clause& c);
    bool heap_less(std::uint32_t a, std::uint32_t b) const;
    void heap_insert(std::uint32_t v);
    void heap_up(std::size_t pos);
    void heap_down(std::size_t pos);
    std::uint32_t heap_pop();

    std::vector<Clause> clauses_;
    std::vector<std::vector<Watcher>> watches_;  // indexed by literal code
    std::vector<int> assigns_;
    std::vector<char> phase_;
    std::vector<std::uint32_t> level_;
    std::vector<std::uint32_t> reason_;
    std::vector<Lit> trail_;
    std::vector<std::size_t> trail_lim_;
    std::size_t qhead_ = 0;
    bool ok_ = true;

    std::vector<double> activity_;
    double var_inc_ = 1.0;
    double clause_inc_ = 1.0;
    std::vector<std::uint32_t> heap_;
    std::vector<std::int64_t> heap_pos_;  // -1 when absent

    std::vector<char> seen_;
    std::vector<char> model_;
    std::size_t num_learnts_ = 0;
    std::size_t max_learnts_ = 0;
    std::uint64_t conflicts_ = 0;
    std::uint64_t decisions_ = 0;
};

} // namespace qfun::sat
