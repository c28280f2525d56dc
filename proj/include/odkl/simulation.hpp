#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "odkl/config.hpp"
#include "odkl/data.hpp"
#include "odkl/engine.hpp"
#include "odkl/features.hpp"
#include "odkl/metrics.hpp"

namespace odkl::simulation {

struct RunSummary {
    std::string algorithm;
    int n_agents = 0;
    int l_count = 0;
    int rounds = 0;
    double final_mse_running = 0.0;
    bool regret_available = false;
    double final_regret = 0.0;
    std::int64_t triggers = 0;
    std::int64_t bits = 0;
    std::int64_t clip_events = 0;
    double mean_step_time_us = 0.0;
    double max_gradient_norm = 0.0; // empirical bound on ||grad L_it||
    double max_theta_norm = 0.0;    // empirical bound on ||theta_it||
};

struct RunResult {
    std::vector<metrics::MetricsRecord> rows;
    RunSummary summary;
};

struct RunHooks {
    // Called after every completed round with the live network.
    std::function<void(int t, const engine::Network&)> after_round;
    // Message trace sink: one "t,sender,bits,clipped_count" line per
    // transmission.
    std::ostream* trace = nullptr;
    // Edge-list sink, written once before the run.
    std::ostream* graph_dump = nullptr;
};

// Prepared inputs shared by the runner, the golden fixtures, and tests.
struct Inputs {
    data::AgentStreams streams; // normalized, partitioned, truncated to rounds
    features::RFBasis basis;
    graph::Topology topology;
    int rounds = 0;
};

Inputs build_inputs(const config::RunConfig& config);

// Per-agent (z, y) pairs for 1-based round t.
std::vector<engine::Sample> round_samples(const data::AgentStreams& streams,
                                          const features::RFBasis& basis, int t);

// load -> normalize -> partition -> simulate -> metrics. Identical config
// (with timing disabled) produces identical rows.
RunResult run_simulation(const config::RunConfig& config, const RunHooks& hooks = {});

void write_summary(const RunSummary& summary, std::ostream& out);

struct CompareRow {
    std::string algorithm;
    int t = 0;
    double mse_running = 0.0;
    std::int64_t triggers_cum = 0;
    std::int64_t bits_cum = 0;
    double regret_cum = 0.0;
    double step_time_us = 0.0;
};

struct CompareResult {
    std::vector<CompareRow> rows;
    std::vector<RunSummary> summaries;
};

// Runs each config and merges the curves into one long-format table keyed by
// (algorithm, t). Configs must agree on dataset, seeds, graph, loss, and RF
// settings; only the algorithm and its hyper/comm knobs may differ.
CompareResult compare_runs(const std::vector<config::RunConfig>& configs);

void write_compare_csv(const std::vector<CompareRow>& rows, const std::filesystem::path& path);

} // namespace odkl::simulation
