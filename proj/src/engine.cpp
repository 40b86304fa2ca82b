#include "qfun/engine.hpp"

#include "qfun/error.hpp"
#include "qfun/sat.hpp"

namespace qfun {

void EngineConfig::validate() const {
    if (learn_interval == 0) throw Error("learning interval K must be at least 1");
    if (!accumulate && !learning_enabled) throw Error("forgetful mode requires learning");
}

const char* to_string(Answer a) {
    switch (a) {
    case Answer::True: return "TRUE";
    case Answer::False: return "FALSE";
    case Answer::Unknown: break;
    }
    return "UNKNOWN";
}

bool magic(std::uint64_t counter, const EngineConfig& cfg) {
    return cfg.learning_enabled && cfg.learn_interval > 0 && counter > 0 && counter % cfg.learn_interval == 0;
}

Verdict wins_one(Aig& aig, Quantifier q, std::span<const Var> top, std::span<const NodeRef> phis,
                 const Budget& budget) {
    std::vector<NodeRef> alpha(phis.begin(), phis.end());
    if (q == Quantifier::Forall) {
        for (auto& phi : alpha) phi = !phi;
    }
    const auto result = sat_solve(encode(aig, alpha), top, budget);
    if (!result.sat()) return Verdict::no_winning_move();
    return Verdict::winning(*result.model);
}

Substitution constant_strategies(const Assignment& mu) {
    Substitution s;
    for (const auto& [y, value] : mu) s.emplace(y, value ? kTrue : kFalse);
    return s;
}

void refine(Aig& aig, MultiGame& abstraction, const Game& phi_l, const Substitution& strategies) {
    if (phi_l.propositional()) {
        abstraction.subgames.push_back(phi_l);
        return;
    }
    Substitution sigma;
    for (Var y : phi_l.first_block()) {
        auto it = strategies.find(y);
        if (it == strategies.end()) throw Error("refine: no strategy for variable '" + aig.var_name(y) + "'");
        sigma.emplace(y, it->second);
    }
    if (phi_l.prefix.num_blocks() >= 2) {
        for (Var x : phi_l.prefix.block(1).vars) {
            const Var copy = aig.fresh_copy(x);
            sigma.emplace(x, aig.mk_var(copy));
            abstraction.top_vars.push_back(copy);
        }
    }
    abstraction.subgames.push_back(Game{phi_l.prefix.drop_front(2), aig.substitute(phi_l.matrix, sigma)});
}

Solver::Solver(Aig& aig, EngineConfig cfg) : aig_(aig), cfg_(cfg) { cfg_.validate(); }

std::optional<Assignment> Solver::counter_move(Quantifier q, const Game& sub, const Assignment& tau) {
    if (sub.propositional()) {
        const bool value = aig_.evaluate(sub.matrix, tau);
        if (value == (q == Quantifier::Exists)) return std::nullopt;
        return Assignment{};
    }
    MultiGame child{opponent(q), sub.first_block(), {Game{sub.prefix.drop_front(), aig_.apply(sub.matrix, tau)}}};
    Verdict reply = qfun(child);
    if (!reply.has_winning_move()) return std::nullopt;
    return restrict(reply.move(), sub.first_block());
}

Verdict Solver::qfun(const MultiGame& mg) {
    const auto call_id = next_call_id_++;
    if (mg.all_propositional()) {
        std::vector<NodeRef> phis;
        phis.reserve(mg.subgames.size());
        for (const auto& g : mg.subgames) phis.push_back(g.matrix);
        ++stats_.sat_calls;
        return wins_one(aig_, mg.quantifier, mg.top_vars, phis, budget_);
    }

    std::vector<SampleBatch> samples;
    samples.reserve(mg.subgames.size());
    for (const auto& g : mg.subgames) {
        samples.emplace_back(mg.top_vars, g.propositional() ? std::vector<Var>{} : g.first_block());
    }
    StrategyStore store;
    MultiGame abstraction{mg.quantifier, mg.top_vars, {}};
    std::uint64_t counter = 0;

    for (;;) {
        budget_.check();
        ++stats_.iterations;
        const Verdict candidate = qfun(abstraction);
        if (!candidate.has_winning_move()) return Verdict::no_winning_move();
        Assignment tau = restrict(candidate.move(), mg.top_vars);
        if (observer_) observer_(call_id, tau);

        std::size_t l = mg.subgames.size();
        Assignment mu;
        for (std::size_t i = 0; i < mg.subgames.size(); ++i) {
            if (auto reply = counter_move(mg.quantifier, mg.subgames[i], tau)) {
                l = i;
                mu = std::move(*reply);
                break;
            }
        }
        if (l == mg.subgames.size()) return Verdict::winning(std::move(tau));

        samples[l].add(tau, mu);
        if (magic(++counter, cfg_)) {
            ++stats_.learn_calls;
            const auto learned = learn_strategies(aig_, samples[l], store, cfg_.accumulate);
            stats_.kept_strategies += learned.kept;
            refine(aig_, abstraction, mg.subgames[l], learned.strategies);
            samples[l].clear();
        } else {
            refine(aig_, abstraction, mg.subgames[l], constant_strategies(mu));
        }
        ++stats_.refinements;
    }
}

SolveResult Solver::solve(const Game& g) {
    if (!is_closed(aig_, g)) throw Error("solve: formula has free variables");
    budget_ = Budget::seconds(cfg_.time_limit_s, cfg_.memory_limit_bytes);
    stats_ = {};
    SolveResult result;
    if (g.propositional()) {
        result.answer = aig_.evaluate(g.matrix, {}) ? Answer::True : Answer::False;
        return result;
    }
    const Quantifier q = g.first_quantifier();
    const MultiGame mg{q, g.first_block(), {Game{g.prefix.drop_front(), g.matrix}}};
    try {
        const Verdict v = qfun(mg);
        const bool top_wins = v.has_winning_move();
        result.answer = (top_wins == (q == Quantifier::Exists)) ? Answer::True : Answer::False;
        if (top_wins) result.top_move = v.move();
    } catch (const ResourceLimit&) {
        result.answer = Answer::Unknown;
    }
    result.stats = stats_;
    return result;
}

} // namespace qfun
