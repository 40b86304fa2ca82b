#pragma once

#include "qfun/engine.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace qfun {

/// Named solver configuration: "no-learn", "k=<N>" or "k=<N>-f" (forgetful).
struct RunConfig {
    std::string name;
    EngineConfig engine;
};

RunConfig parse_run_config(std::string_view text);

struct RunRecord {
    std::string instance;
    std::string config;
    std::string verdict;  // TRUE, FALSE, UNKNOWN or ERROR
    double time_s = 0;
    SolveStats stats;
};

/// Parses and solves one file. Unreadable or malformed files yield ERROR.
RunRecord run_instance(const std::filesystem::path& path, const RunConfig& config);

/// Sorted `.qcir` files directly under `dir`.
std::vector<std::filesystem::path> list_corpus(const std::filesystem::path& dir);

/// Every (instance, config) pair, instance-major in the given order. `jobs`
/// worker threads; the result order does not depend on scheduling.
std::vector<RunRecord> run_bench(const std::vector<std::filesystem::path>& instances,
                                 const std::vector<RunConfig>& configs, unsigned jobs = 1);

inline constexpr const char* kCsvHeader =
    "instance,config,verdict,time_s,iterations,refinements,learn_calls,kept_strategies";

void write_csv(std::ostream& os, const std::vector<RunRecord>& records);

struct ConfigSummary {
    std::string config;
    std::size_t solved = 0;
    std::size_t total = 0;
    double time_s = 0;
};

std::vector<ConfigSummary> summarize(const std::vector<RunRecord>& records, const std::vector<RunConfig>& configs);

void write_summary(std::ostream& os, const std::vector<ConfigSummary>& summaries);

/// QCIR text for the n-bit equality family ("equality": forall X exists Y
/// of AND(x_i <-> y_i)) or its negation ("equality-neg").
std::string gen_family(std::string_view name, unsigned n);

} // namespace qfun
