#include "qfun/cli.hpp"

#include "qfun/bench.hpp"
#include "qfun/engine.hpp"
#include "qfun/qcir.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace qfun {

namespace {

struct SolveOptions {
    std::string input;
    unsigned k = 64;
    bool no_learn = false;
    bool forgetful = false;
    double time_limit = 0;
    double memory_limit_mb = 0;
    bool stats = false;
};

struct BenchOptions {
    std::string dir;
    std::vector<std::string> configs;
    double time_limit = 60;
    unsigned jobs = 1;
    std::string out;
};

struct GenOptions {
    std::string family;
    unsigned n = 1;
    std::string out;
};

int cmd_solve(const SolveOptions& opt, std::ostream& out, std::ostream& err) {
    EngineConfig cfg;
    cfg.learn_interval = opt.k;
    cfg.learning_enabled = !opt.no_learn;
    cfg.accumulate = !opt.forgetful;
    cfg.time_limit_s = opt.time_limit;
    cfg.memory_limit_bytes = static_cast<std::size_t>(opt.memory_limit_mb * 1024 * 1024);
    try {
        cfg.validate();
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    Aig aig;
    QcirProblem problem;
    try {
        problem = read_qcir_file(opt.input, aig);
    } catch (const Error& e) {
        err << opt.input << ": " << e.what() << '\n';
        return kExitUsage;
    }

    Solver solver(aig, cfg);
    const auto result = solver.solve(problem.game);
    if (opt.stats) {
        out << "c iterations " << result.stats.iterations << '\n'
            << "c refinements " << result.stats.refinements << '\n'
            << "c learn_calls " << result.stats.learn_calls << '\n'
            << "c kept_strategies " << result.stats.kept_strategies << '\n'
            << "c sat_calls " << result.stats.sat_calls << '\n';
    }
    out << "s " << to_string(result.answer) << '\n';
    if (result.top_move) {
        out << 'v';
        for (Var v : problem.game.first_block()) out << ' ' << (result.top_move->get(v) ? "" : "-") << aig.var_name(v);
        out << '\n';
    }
    switch (result.answer) {
    case Answer::True: return kExitTrue;
    case Answer::False: return kExitFalse;
    case Answer::Unknown: break;
    }
    return kExitUnknown;
}

int cmd_bench(const BenchOptions& opt, std::ostream& out, std::ostream& err) {
    std::vector<RunConfig> configs;
    try {
        for (const auto& c : opt.configs.empty() ? std::vector<std::string>{"no-learn", "k=64"} : opt.configs) {
            configs.push_back(parse_run_config(c));
            configs.back().engine.time_limit_s = opt.time_limit;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    std::vector<std::filesystem::path> corpus;
    try {
        corpus = list_corpus(opt.dir);
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    const auto records = run_bench(corpus, configs, opt.jobs);
    const auto summary = summarize(records, configs);
    if (opt.out.empty()) {
        write_csv(out, records);
        write_summary(err, summary);
    } else {
        std::ofstream csv(opt.out, std::ios::binary);
        if (!csv) {
            err << "error: cannot write " << opt.out << '\n';
            return kExitUsage;
        }
        write_csv(csv, records);
        write_summary(out, summary);
    }
    return 0;
}

int cmd_gen(const GenOptions& opt, std::ostream& out, std::ostream& err) {
    std::string text;
    try {
        text = gen_family(opt.family, opt.n);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    if (opt.out.empty()) {
        out << text;
        return 0;
    }
    std::ofstream file(opt.out, std::ios::binary);
    if (!file) {
        err << "error: cannot write " << opt.out << '\n';
        return kExitUsage;
    }
    file << text;
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"qfun: QBF solving by counterexample-guided expansion with strategy learning", "qfun"};
    app.require_subcommand(1);

    SolveOptions solve;
    auto* s = app.add_subcommand("solve", "Decide one QCIR instance");
    s->add_option("input", solve.input, "QCIR file")->required();
    s->add_option("--k", solve.k, "Learn every K iterations of each refinement loop")->check(CLI::PositiveNumber);
    s->add_flag("--no-learn", solve.no_learn, "Plain expansion refinement without learning");
    s->add_flag("--forgetful", solve.forgetful, "Do not keep strategies between learning rounds");
    s->add_option("--time-limit", solve.time_limit, "Wall-clock limit in seconds (0 = none)");
    s->add_option("--memory-limit", solve.memory_limit_mb, "Resident memory limit in MiB (0 = none)");
    s->add_flag("--stats", solve.stats, "Print solver statistics");

    BenchOptions bench;
    auto* b = app.add_subcommand("bench", "Run every .qcir file of a directory under each configuration");
    b->add_option("dir", bench.dir, "Corpus directory")->required();
    b->add_option("--config", bench.configs, "no-learn, k=<N> or k=<N>-f (repeatable)");
    b->add_option("--time-limit", bench.time_limit, "Per-instance limit in seconds");
    b->add_option("--jobs", bench.jobs, "Worker threads")->check(CLI::PositiveNumber);
    b->add_option("--out", bench.out, "CSV output file (default: stdout)");

    GenOptions gen;
    auto* g = app.add_subcommand("gen", "Emit a benchmark family as QCIR");
    g->add_option("family", gen.family, "equality or equality-neg")->required();
    g->add_option("n", gen.n, "Number of bits")->required()->check(CLI::PositiveNumber);
    g->add_option("-o,--out", gen.out, "Output file (default: stdout)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    if (*s) return cmd_solve(solve, out, err);
    if (*b) return cmd_bench(bench, out, err);
    return cmd_gen(gen, out, err);
}

} // namespace qfun
