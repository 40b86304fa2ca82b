#pragma once

#include "qfun/aig.hpp"
#include "qfun/budget.hpp"
#include "qfun/learner.hpp"
#include "qfun/prefix.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>

namespace qfun {

struct EngineConfig {
    unsigned learn_interval = 64;  // K
    bool learning_enabled = true;
    bool accumulate = true;        // off = forgetful
    double time_limit_s = 0;       // 0 = unlimited
    std::size_t memory_limit_bytes = 0;

    /// Throws Error when K is zero or forgetful is set without learning.
    void validate() const;
};

/// Winning move for the top block of a multi-game, or none.
class Verdict {
public:
    static Verdict no_winning_move() { return Verdict(); }
    static Verdict winning(Assignment tau) {
        Verdict v;
        v.move_ = std::move(tau);
        return v;
    }

    bool has_winning_move() const { return move_.has_value(); }
    const Assignment& move() const { return *move_; }

private:
    std::optional<Assignment> move_;
};

struct SolveStats {
    std::uint64_t iterations = 0;   // candidates drawn, all recursion levels
    std::uint64_t refinements = 0;
    std::uint64_t learn_calls = 0;
    std::uint64_t kept_strategies = 0;
    std::uint64_t sat_calls = 0;
};

enum class Answer { True, False, Unknown };

const char* to_string(Answer a);

struct SolveResult {
    Answer answer = Answer::Unknown;
    /// Winning move of the top block when the top player wins.
    std::optional<Assignment> top_move;
    SolveStats stats;
};

/// Learning fires on positive multiples of K when enabled.
bool magic(std::uint64_t counter, const EngineConfig& cfg);

/// One-move multi-game: SAT over the conjunction (EXISTS) or the conjunction
/// of negations (FORALL). The model is completed with 0 on `top`.
Verdict wins_one(Aig& aig, Quantifier q, std::span<const Var> top, std::span<const NodeRef> phis,
                 const Budget& budget = {});

/// Appends phi_l[S] to `abstraction`. When phi_l has a second block X1, its
/// variables are replaced by fresh duplicates that join the abstraction's top
/// block. `strategies` must cover the first block of phi_l.
void refine(Aig& aig, MultiGame& abstraction, const Game& phi_l, const Substitution& strategies);

/// Constant strategies y -> mu(y).
Substitution constant_strategies(const Assignment& mu);

/// Counterexample-guided expansion solver with periodic strategy learning.
class Solver {
public:
    using CandidateObserver = std::function<void(std::uint64_t call_id, const Assignment& candidate)>;

    Solver(Aig& aig, EngineConfig cfg = {});

    Verdict qfun(const MultiGame& mg);
    SolveResult solve(const Game& g);

    /// Sees every filtered candidate of every recursive qfun call.
    void set_candidate_observer(CandidateObserver observer) { observer_ = std::move(observer); }

    const SolveStats& stats() const { return stats_; }
    const EngineConfig& config() const { return cfg_; }

private:
    /// Counter-move to `tau` in `sub`, or nullopt when tau wins it.
    std::optional<Assignment> counter_move(Quantifier q, const Game& sub, const Assignment& tau);

    Aig& aig_;
    EngineConfig cfg_;
    Budget budget_;
    SolveStats stats_;
    CandidateObserver observer_;
    std::uint64_t next_call_id_ = 0;
};

} // namespace qfun
