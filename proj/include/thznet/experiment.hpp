// SPDX-License-Identifier: Apache-2.0
//
// Batch orchestration: expands an ExperimentSpec into independent
// (protocol, seed, sweep value) runs, executes them on a thread pool and
// writes one per-round CSV per run plus summary.csv.
#pragma once

#include "thznet/config.hpp"
#include "thznet/engine.hpp"
#include "thznet/metrics.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace thznet::experiment {

enum class Mode {
    Run,     // spec protocols x seeds, sweep ignored
    Compare, // all four protocols x seeds, sweep ignored
    Sweep,   // spec protocols x seeds x sweep values
};

struct RunKey {
    Protocol protocol = Protocol::EBACC;
    std::uint64_t seed = 0;
    std::optional<std::string> sweep_value;
};

struct RunSummary {
    RunKey key;
    std::size_t nodes = 0;
    double horizon_s = 0.0;
    std::optional<int> lifetime;
    std::size_t survivors = 0;
    std::optional<double> success_rate;
    double throughput = 0.0; // bit/s
    std::optional<double> overhead_ratio;
};

struct Job {
    RunKey key;
    SimConfig config;
};

struct Result {
    std::vector<std::filesystem::path> files; // per-run CSVs in job order, then summary.csv
    std::vector<RunSummary> runs;
};

inline constexpr const char *kRoundsHeader =
    "round,dead_count,avg_residual_fraction,packets_generated,packets_delivered,delivered_bits,control_bytes,"
    "total_bytes";
inline constexpr const char *kSummaryHeader = "protocol,sweep_parameter,sweep_value,seed,nodes,horizon_s,lifetime,"
                                              "survivors,success_rate,throughput_bps,overhead_ratio";

/// Job list in output order: sweep value, then protocol, then seed.
std::vector<Job> expand(const config::ExperimentSpec &spec, Mode mode);

RunSummary summarize(const RunKey &key, std::span<const metrics::RoundMetrics> rounds, std::size_t nodes,
                     double horizon_s);

/// Median over seeds; a missing value sorts above every present one and a
/// median that lands on one is missing.
std::optional<double> median(std::vector<std::optional<double>> values);

std::string rounds_file_name(const RunKey &key, const std::optional<std::string> &sweep_parameter);

void write_rounds_csv(std::ostream &out, std::span<const metrics::RoundMetrics> rounds);
std::vector<metrics::RoundMetrics> read_rounds_csv(std::istream &in);

void write_summary_csv(std::ostream &out, std::span<const RunSummary> runs,
                       const std::optional<std::string> &sweep_parameter);

/// Throws if the mode needs a sweep the spec lacks, on I/O failure, or with
/// the first engine error after all runs finish.
Result run_experiment(const config::ExperimentSpec &spec, Mode mode);

} // namespace thznet::experiment
