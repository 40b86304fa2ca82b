// Acceptance gate: one line per criterion, nonzero exit on any failure.

#include "support.hpp"

#include "qfun/bench.hpp"
#include "qfun/engine.hpp"
#include "qfun/learner.hpp"
#include "qfun/oracle.hpp"
#include "qfun/qcir.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <future>
#include <set>
#include <sstream>
#include <thread>

using namespace qfun;
namespace fs = std::filesystem;

namespace {

// Pinned thresholds.
constexpr int kRandomGames = 500;
constexpr std::size_t kMaxBlocks = 3, kMaxVars = 10, kMaxGates = 40;
constexpr double kOracleBudgetS = 120;
constexpr unsigned kLearnK = 16;
constexpr unsigned kLearnN = 32;
constexpr double kLearnLimitS = 60;
constexpr unsigned kNoLearnN = 20;
constexpr double kNoLearnLimitS = 60;
constexpr unsigned kCompareN = 8;
constexpr int kLearnerSets = 1000;
constexpr std::size_t kMaxFeatures = 8, kMaxExamples = 64;
constexpr int kAigTerms = 10000;
constexpr std::size_t kAigMaxVars = 8;
constexpr double kAigBudgetS = 30;
constexpr std::size_t kRoundTripMaxVars = 12;
constexpr double kTimeRelTol = 0.20;
constexpr double kTimeAbsSlackS = 0.010;  // one scheduler quantum; the CSV prints 1 ms steps
constexpr double kBenchLimitS = 60;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
    std::printf("[%s] %d %s: %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Game equality_game(Aig& aig, unsigned n, const char* family = "equality") {
    return parse_qcir(gen_family(family, n), aig).game;
}

// 1 and 2 share the corpus.
void oracle_criteria() {
    std::mt19937 rng(2017);
    int agree = 0, moves = 0, bad_moves = 0;
    const auto t0 = Clock::now();
    for (int i = 0; i < kRandomGames; ++i) {
        Aig aig;
        const Game g = test::random_qbf(rng, aig, kMaxBlocks, kMaxVars, kMaxGates);
        Solver solver(aig);
        const auto r = solver.solve(g);
        const bool expected = oracle::brute_force_eval(aig, g);
        if (r.answer == (expected ? Answer::True : Answer::False)) ++agree;

        const MultiGame mg = oracle::as_multigame(g);
        const bool oracle_has_move = oracle::brute_force_winning_move(aig, mg).has_winning_move();
        if (r.top_move) {
            ++moves;
            if (!oracle_has_move || !oracle::is_winning_move(aig, mg, *r.top_move)) ++bad_moves;
        } else if (oracle_has_move) {
            ++bad_moves;
        }
    }
    const double elapsed = seconds_since(t0);
    report(1, "oracle-equivalence", agree == kRandomGames && elapsed < kOracleBudgetS,
           fmt("%d/%d verdicts agree in %.2f s (limit %.0f s)", agree, kRandomGames, elapsed, kOracleBudgetS));
    report(2, "winning-move-verification", bad_moves == 0,
           fmt("%d top-block moves returned, %d failures", moves, bad_moves));
}

SolveResult solve_equality(unsigned n, EngineConfig cfg) {
    Aig aig;
    const Game g = equality_game(aig, n);
    Solver solver(aig, cfg);
    return solver.solve(g);
}

void learning_effect(std::future<SolveResult>& no_learn_run) {
    EngineConfig learn;
    learn.learn_interval = kLearnK;
    learn.time_limit_s = kLearnLimitS;
    const auto t0 = Clock::now();
    const auto with = solve_equality(kLearnN, learn);
    const double learn_time = seconds_since(t0);

    EngineConfig plain;
    plain.learning_enabled = false;
    EngineConfig small_learn;
    small_learn.learn_interval = kLearnK;
    const auto small_with = solve_equality(kCompareN, small_learn);
    const auto small_without = solve_equality(kCompareN, plain);

    const auto without = no_learn_run.get();
    const bool ok = with.answer == Answer::True && learn_time < kLearnLimitS && without.answer == Answer::Unknown &&
                    small_with.answer == Answer::True && small_without.answer == Answer::True &&
                    small_with.stats.iterations < small_without.stats.iterations;
    report(3, "equality-learning-effect", ok,
           fmt("k=%u n=%u %s in %.2f s; no-learn n=%u %s at %.0f s after %llu iterations; "
               "n=%u iterations %llu (k=%u) vs %llu (no-learn)",
               kLearnK, kLearnN, to_string(with.answer), learn_time, kNoLearnN, to_string(without.answer),
               kNoLearnLimitS, static_cast<unsigned long long>(without.stats.iterations), kCompareN,
               static_cast<unsigned long long>(small_with.stats.iterations), kLearnK,
               static_cast<unsigned long long>(small_without.stats.iterations)));
}

bool same_function(const Aig& aig, NodeRef f, NodeRef g, const std::vector<Var>& vars) {
    bool same = true;
    test::for_all_assignments(vars.size(), [&](const std::vector<char>& x) {
        const auto a = test::to_assignment(vars, x);
        same = same && aig.evaluate(f, a) == aig.evaluate(g, a);
    });
    return same;
}

void accumulation_example() {
    // Rows (x1 x2 x3 | y1 y2 y3); K = 2 puts two rows in each batch.
    const std::vector<std::vector<bool>> rows = {{0, 0, 0}, {1, 0, 0}, {0, 0, 1}, {0, 1, 1}};
    bool ok = true;
    for (bool accumulate : {true, false}) {
        Aig aig;
        std::vector<Var> xs, ys;
        for (int i = 1; i <= 3; ++i) xs.push_back(aig.new_var("x" + std::to_string(i)));
        for (int i = 1; i <= 3; ++i) ys.push_back(aig.new_var("y" + std::to_string(i)));
        auto batch = [&](std::size_t first) {
            SampleBatch b(xs, ys);
            for (std::size_t r = first; r < first + 2; ++r) {
                Assignment tau, mu;
                for (std::size_t i = 0; i < 3; ++i) {
                    tau.set(xs[i], rows[r][i]);
                    mu.set(ys[i], rows[r][i]);
                }
                b.add(tau, mu);
            }
            return b;
        };
        const NodeRef x1 = aig.mk_var(xs[0]), x2 = aig.mk_var(xs[1]);
        StrategyStore store;
        const auto first = learn_strategies(aig, batch(0), store, accumulate);
        ok = ok && same_function(aig, first.strategies.at(ys[0]), x1, xs);
        const auto second = learn_strategies(aig, batch(2), store, accumulate);
        if (accumulate) {
            ok = ok && same_function(aig, second.strategies.at(ys[0]), x1, xs) &&
                 same_function(aig, second.strategies.at(ys[1]), x2, xs);
        } else {
            ok = ok && second.strategies.at(ys[0]) == kFalse && same_function(aig, second.strategies.at(ys[1]), x2, xs);
        }
    }
    report(4, "accumulation-example", ok,
           ok ? "batch 1 gives y1 = x1; accumulation keeps y1 = x1 and adds y2 = x2; forgetful gives y1 = 0"
              : "learned strategies differ from the worked example");
}

DecisionTree random_tree(std::mt19937& rng, std::vector<Var> available) {
    if (available.empty() || std::uniform_int_distribution<int>(0, 3)(rng) == 0)
        return DecisionTree::leaf((rng() & 1u) != 0);
    const auto k = std::uniform_int_distribution<std::size_t>(0, available.size() - 1)(rng);
    const Var f = available[k];
    available.erase(available.begin() + static_cast<std::ptrdiff_t>(k));
    return DecisionTree::split(f, random_tree(rng, available), random_tree(rng, available));
}

void learner_suite() {
    std::mt19937 rng(616);
    int misfits = 0, inequivalent = 0, out_of_domain = 0;

    // (a) consistent sets: labels are a function of the feature vector.
    for (int i = 0; i < kLearnerSets; ++i) {
        const auto nf = std::uniform_int_distribution<std::size_t>(1, kMaxFeatures)(rng);
        const auto ne = std::uniform_int_distribution<std::size_t>(0, kMaxExamples)(rng);
        std::vector<Var> features(nf);
        for (std::size_t f = 0; f < nf; ++f) features[f] = static_cast<Var>(f);
        std::vector<char> truth(std::size_t{1} << nf);
        for (auto& t : truth) t = static_cast<char>(rng() & 1u);
        std::vector<LabeledExample> train;
        for (std::size_t e = 0; e < ne; ++e) {
            const std::uint64_t bits = rng() & ((std::uint64_t{1} << nf) - 1);
            Assignment a;
            for (std::size_t f = 0; f < nf; ++f) a.set(features[f], ((bits >> f) & 1u) != 0);
            train.push_back({a, truth[bits] != 0});
        }
        const auto tree = id3(train, features);
        for (const auto& ex : train)
            if (tree.classify(ex.features) != ex.label) {
                ++misfits;
                break;
            }
    }

    // (b) extraction and minimization preserve the tree's function.
    for (int i = 0; i < kLearnerSets; ++i) {
        Aig aig;
        const auto nf = std::uniform_int_distribution<std::size_t>(1, kMaxFeatures)(rng);
        const auto vars = test::make_vars(aig, nf);
        const auto tree = random_tree(rng, vars);
        const auto cubes = tree_to_cubes(tree);
        const NodeRef f = cubes_to_formula(aig, subsume_fixpoint(cubes.positive), subsume_fixpoint(cubes.negative));
        bool same = true;
        test::for_all_assignments(nf, [&](const std::vector<char>& x) {
            const auto a = test::to_assignment(vars, x);
            same = same && aig.evaluate(f, a) == tree.classify(a);
        });
        if (!same) ++inequivalent;
    }

    // (c) learned strategies mention only the feature block.
    std::mt19937 games(77);
    std::size_t strategies = 0;
    for (int i = 0; i < 200; ++i) {
        Aig aig;
        const auto nx = std::uniform_int_distribution<std::size_t>(1, kMaxFeatures)(rng);
        const auto ny = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
        const auto xs = test::make_vars(aig, nx, "x");
        const auto ys = test::make_vars(aig, ny, "y");
        SampleBatch batch(xs, ys);
        std::set<std::uint64_t> seen;
        for (std::size_t e = 0; e < kMaxExamples; ++e) {
            const std::uint64_t bits = games() & ((std::uint64_t{1} << nx) - 1);
            if (!seen.insert(bits).second) continue;
            Assignment tau, mu;
            for (std::size_t k = 0; k < nx; ++k) tau.set(xs[k], ((bits >> k) & 1u) != 0);
            for (Var y : ys) mu.set(y, (games() & 1u) != 0);
            batch.add(tau, mu);
        }
        StrategyStore store;
        for (const auto& [y, psi] : learn_strategies(aig, batch, store, true).strategies) {
            ++strategies;
            for (Var v : aig.collect_vars(psi))
                if (std::find(xs.begin(), xs.end(), v) == xs.end()) {
                    ++out_of_domain;
                    break;
                }
        }
    }

    report(5, "learner-soundness", misfits == 0 && inequivalent == 0 && out_of_domain == 0,
           fmt("(a) %d/%d sets misfit, (b) %d/%d trees inequivalent, (c) %d/%zu strategies outside their domain",
               misfits, kLearnerSets, inequivalent, kLearnerSets, out_of_domain, strategies));
}

void aig_suite() {
    std::mt19937 rng(6);
    int violations = 0;
    const auto t0 = Clock::now();
    for (int i = 0; i < kAigTerms; ++i) {
        Aig aig;
        const auto n = std::uniform_int_distribution<std::size_t>(1, kAigMaxVars)(rng);
        const auto vars = test::make_vars(aig, n);
        const auto expr = test::random_expr(rng, n, 5);
        const NodeRef f = expr->build(aig, vars);

        // Uniqueness: rebuilding is free and no two ANDs share children.
        const auto size = aig.size();
        if (expr->build(aig, vars) != f || aig.size() != size) ++violations;
        std::set<std::pair<std::uint32_t, std::uint32_t>> kids;
        for (std::uint32_t k = 0; k < aig.size(); ++k) {
            const auto& node = aig.node(k);
            if (node.kind != Aig::Kind::And) continue;
            if (!kids.insert({node.left.raw(), node.right.raw()}).second) ++violations;
        }

        // Level-1 identities on f and a second term.
        const NodeRef g = test::random_expr(rng, n, 3)->build(aig, vars);
        if (aig.mk_and(f, f) != f || aig.mk_and(f, !f) != kFalse || aig.mk_and(f, kTrue) != f ||
            aig.mk_and(f, kFalse) != kFalse || aig.mk_and(f, g) != aig.mk_and(g, f))
            ++violations;

        // evaluate(f[sigma], tau) = evaluate(f, tau o sigma), exhaustively.
        std::vector<std::shared_ptr<test::Expr>> images(n);
        Substitution sigma;
        for (std::size_t v = 0; v < n; ++v) {
            images[v] = test::random_expr(rng, n, 2);
            sigma.emplace(vars[v], images[v]->build(aig, vars));
        }
        const NodeRef composed = aig.substitute(f, sigma);
        test::for_all_assignments(n, [&](const std::vector<char>& x) {
            std::vector<char> y(n);
            for (std::size_t v = 0; v < n; ++v) y[v] = images[v]->eval(x) ? 1 : 0;
            const auto tau = test::to_assignment(vars, x);
            if (aig.evaluate(f, tau) != expr->eval(x)) ++violations;
            if (aig.evaluate(composed, tau) != expr->eval(y)) ++violations;
        });
    }
    const double elapsed = seconds_since(t0);
    report(6, "formula-engine", violations == 0 && elapsed < kAigBudgetS,
           fmt("%d violations over %d terms in %.2f s (limit %.0f s)", violations, kAigTerms, elapsed, kAigBudgetS));
}

void qcir_round_trip() {
    int files = 0, checked = 0, broken = 0;
    for (const auto& file : list_corpus(QFUN_TEST_CORPUS)) {
        ++files;
        try {
            Aig aig;
            const auto p = read_qcir_file(file, aig);
            Aig back;
            const auto q = parse_qcir(print_qcir(aig, p.game), back);
            if (q.game.prefix.num_blocks() != p.game.prefix.num_blocks() ||
                q.game.prefix.num_vars() != p.game.prefix.num_vars())
                ++broken;
            if (p.game.prefix.num_vars() <= kRoundTripMaxVars) {
                ++checked;
                if (oracle::brute_force_eval(aig, p.game) != oracle::brute_force_eval(back, q.game)) ++broken;
            }
        } catch (const Error&) {
            ++broken;
        }
    }
    auto rejects = [](const char* name, QcirErrorKind kind) {
        Aig aig;
        try {
            read_qcir_file(fs::path(QFUN_TEST_FIXTURES) / name, aig);
        } catch (const QcirError& e) {
            return e.kind() == kind;
        }
        return false;
    };
    const bool unbound = rejects("unbound.qcir", QcirErrorKind::FreeVariable);
    const bool cyclic = rejects("cyclic.qcir", QcirErrorKind::CyclicGate);
    report(7, "qcir-round-trip", files > 0 && broken == 0 && unbound && cyclic,
           fmt("%d files, %d oracle-checked, %d broken; unbound %s, cyclic %s", files, checked, broken,
               unbound ? "rejected" : "ACCEPTED", cyclic ? "rejected" : "ACCEPTED"));
}

struct CsvRow {
    std::vector<std::string> fields;
    double time_s = 0;
};

std::vector<CsvRow> parse_csv(const std::string& text) {
    std::vector<CsvRow> rows;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        CsvRow row;
        std::istringstream cells(line);
        int column = 0;
        for (std::string cell; std::getline(cells, cell, ','); ++column) {
            if (column == 3 && !rows.empty()) {
                row.time_s = std::stod(cell);
                cell.clear();
            }
            row.fields.push_back(cell);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void determinism() {
    std::vector<RunConfig> configs;
    for (const char* c : {"no-learn", "k=16", "k=64-f"}) {
        configs.push_back(parse_run_config(c));
        configs.back().engine.time_limit_s = kBenchLimitS;
    }
    const auto corpus = list_corpus(QFUN_TEST_CORPUS);
    auto run = [&] {
        std::ostringstream os;
        write_csv(os, run_bench(corpus, configs, 1));
        return os.str();
    };
    run();  // warm-up, not compared
    const auto a = parse_csv(run()), b = parse_csv(run());
    bool fields = a.size() == b.size() && a.size() == 1 + corpus.size() * configs.size();
    bool times = true;
    double worst = 0;
    std::string worst_row;
    for (std::size_t i = 0; fields && i < a.size(); ++i) {
        fields = a[i].fields == b[i].fields;
        const double diff = std::fabs(a[i].time_s - b[i].time_s);
        const double allowed = kTimeRelTol * std::max(a[i].time_s, b[i].time_s) + kTimeAbsSlackS;
        if (diff > allowed) times = false;
        if (diff > worst) {
            worst = diff;
            worst_row = fmt("%s/%s %.3f vs %.3f s", a[i].fields[0].c_str(), a[i].fields[1].c_str(), a[i].time_s,
                            b[i].time_s);
        }
    }
    report(8, "determinism", fields && times,
           fmt("%zu rows, non-time fields %s, times %s (largest gap %s)", a.size() ? a.size() - 1 : 0,
               fields ? "identical" : "DIFFER", times ? "within tolerance" : "OUT OF TOLERANCE",
               worst_row.empty() ? "none" : worst_row.c_str()));
}

} // namespace

int main(int argc, char** argv) {
    // Optional criterion numbers restrict the run, e.g. `acceptance 3 8`.
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
    auto wanted = [&](int id) { return only.empty() || only.count(id) > 0; };

    // The no-learning run has to exhaust its limit; it overlaps with the rest.
    std::future<SolveResult> no_learn_run;
    if (wanted(3)) {
        EngineConfig plain;
        plain.learning_enabled = false;
        plain.time_limit_s = kNoLearnLimitS;
        no_learn_run = std::async(std::launch::async, [plain] { return solve_equality(kNoLearnN, plain); });
    }

    if (wanted(1) || wanted(2)) oracle_criteria();
    if (wanted(4)) accumulation_example();
    if (wanted(5)) learner_suite();
    if (wanted(6)) aig_suite();
    if (wanted(7)) qcir_round_trip();
    if (wanted(8)) determinism();
    if (wanted(3)) learning_effect(no_learn_run);

    const std::size_t total = only.empty() ? 8 : only.size();
    std::printf("%s: %d of %zu criteria failed\n", failures ? "FAILED" : "PASSED", failures, total);
    return failures ? 1 : 0;
}
