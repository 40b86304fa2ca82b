#include "qfun/bench.hpp"

#include "qfun/qcir.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <thread>

namespace qfun {

RunConfig parse_run_config(std::string_view text) {
    RunConfig rc;
    rc.name = std::string(text);
    if (text == "no-learn") {
        rc.engine.learning_enabled = false;
        return rc;
    }
    if (text.substr(0, 2) != "k=") throw Error("unknown configuration '" + rc.name + "'");
    auto body = text.substr(2);
    if (body.size() > 2 && body.substr(body.size() - 2) == "-f") {
        rc.engine.accumulate = false;
        body.remove_suffix(2);
    }
    unsigned k = 0;
    const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), k);
    if (ec != std::errc() || ptr != body.data() + body.size() || k == 0)
        throw Error("bad learning interval in configuration '" + rc.name + "'");
    rc.engine.learn_interval = k;
    return rc;
}

RunRecord run_instance(const std::filesystem::path& path, const RunConfig& config) {
    RunRecord rec;
    rec.instance = path.generic_string();
    rec.config = config.name;
    const auto start = std::chrono::steady_clock::now();
    try {
        Aig aig;
        const auto problem = read_qcir_file(path, aig);
        Solver solver(aig, config.engine);
        const auto result = solver.solve(problem.game);
        rec.verdict = to_string(result.answer);
        rec.stats = result.stats;
    } catch (const Error&) {
        rec.verdict = "ERROR";
    }
    rec.time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

std::vector<std::filesystem::path> list_corpus(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> out;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() == ".qcir") out.push_back(entry.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<RunRecord> run_bench(const std::vector<std::filesystem::path>& instances,
                                 const std::vector<RunConfig>& configs, unsigned jobs) {
    const std::size_t total = instances.size() * configs.size();
    std::vector<RunRecord> records(total);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < total; i = next++) {
            records[i] = run_instance(instances[i / configs.size()], configs[i % configs.size()]);
        }
    };
    jobs = std::max(1u, jobs);
    if (jobs == 1 || total <= 1) {
        worker();
        return records;
    }
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    pool.clear();
    return records;
}

void write_csv(std::ostream& os, const std::vector<RunRecord>& records) {
    os << kCsvHeader << '\n';
    char time[32];
    for (const auto& r : records) {
        std::snprintf(time, sizeof time, "%.3f", r.time_s);
        os << r.instance << ',' << r.config << ',' << r.verdict << ',' << time << ',' << r.stats.iterations << ','
           << r.stats.refinements << ',' << r.stats.learn_calls << ',' << r.stats.kept_strategies << '\n';
    }
}

std::vector<ConfigSummary> summarize(const std::vector<RunRecord>& records, const std::vector<RunConfig>& configs) {
    std::vector<ConfigSummary> out;
    for (const auto& c : configs) {
        ConfigSummary s;
        s.config = c.name;
        for (const auto& r : records) {
            if (r.config != c.name) continue;
            ++s.total;
            s.time_s += r.time_s;
            if (r.verdict == "TRUE" || r.verdict == "FALSE") ++s.solved;
        }
        out.push_back(s);
    }
    return out;
}

void write_summary(std::ostream& os, const std::vector<ConfigSummary>& summaries) {
    char time[32];
    for (const auto& s : summaries) {
        std::snprintf(time, sizeof time, "%.3f", s.time_s);
        os << "c summary config=" << s.config << " solved=" << s.solved << '/' << s.total << " time_s=" << time << '\n';
    }
}

std::string gen_family(std::string_view name, unsigned n) {
    if (n == 0) throw Error("family size must be at least 1");
    const bool negated = name == "equality-neg";
    if (!negated && name != "equality") throw Error("unknown family '" + std::string(name) + "'");
    auto list = [&](char prefix) {
        std::string s;
        for (unsigned i = 1; i <= n; ++i) s += (i > 1 ? ", " : "") + std::string(1, prefix) + std::to_string(i);
        return s;
    };
    std::ostringstream os;
    os << "#QCIR-G14\n";
    os << (negated ? "exists(" : "forall(") << list('x') << ")\n";
    os << (negated ? "forall(" : "exists(") << list('y') << ")\n";
    os << "output(" << (negated ? "-" : "") << "eq)\n";
    for (unsigned i = 1; i <= n; ++i) os << 'd' << i << " = xor(x" << i << ", y" << i << ")\n";
    os << "eq = and(";
    for (unsigned i = 1; i <= n; ++i) os << (i > 1 ? ", " : "") << "-d" << i;
    os << ")\n";
    return os.str();
}

} // namespace qfun
