#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gewi/cluster.hpp"
#include "gewi/config.hpp"
#include "gewi/link.hpp"
#include "gewi/network.hpp"

namespace gewi {

// One fully-specified sweep point plus its per-seed runs and aggregates.
struct P2pPointResult {
    std::string point_key;
    std::string noise_name;
    std::string policy_name;
    std::size_t memory_slots = 0;
    double arrival_prob = 0.0;
    bool baseline = false; // classical reference series (E = 0, plain)
    std::vector<std::uint64_t> seeds;
    std::vector<RunMetrics> runs;
    std::vector<TransmissionRecord> trace; // first seed only, when enabled
    double mean_error = 0.0, std_error = 0.0;
    double mean_throughput = 0.0, std_throughput = 0.0;
};

struct NetworkPointResult {
    std::string point_key;
    std::string noise_name;
    std::string policy_name;
    std::size_t memory_slots = 0;
    double arrival_prob = 0.0;
    bool baseline = false;
    std::vector<std::uint64_t> seeds;
    std::vector<NetworkMetrics> runs;
    double mean_error = 0.0, std_error = 0.0;
    double mean_throughput = 0.0, std_throughput = 0.0;
};

struct ClusterPointResult {
    std::string point_key;
    std::string noise_name;
    int pairs = 0;
    std::vector<std::uint64_t> seeds;
    std::vector<ClusterRunResult> runs;
    double mean_f1 = 0.0, std_f1 = 0.0;
    double mean_transmissions = 0.0, std_transmissions = 0.0;
};

// Sample mean / sample standard deviation (n - 1).
double mean_of(const std::vector<double>& v);
double std_of(const std::vector<double>& v);

// Expands the sweep axes, runs every (point, seed) pair across the worker
// pool, and aggregates. Output order is the deterministic point order, never
// completion order.
std::vector<P2pPointResult> run_p2p_sweep(const ScenarioConfig& cfg);
std::vector<NetworkPointResult> run_network_sweep(const ScenarioConfig& cfg);
std::vector<ClusterPointResult> run_cluster_sweep(const ScenarioConfig& cfg);

// Rendered output files as (name, content); the CLI writes them under the
// configured output directory.
using EmittedFile = std::pair<std::string, std::string>;
std::vector<EmittedFile> emit_p2p_outputs(const ScenarioConfig& cfg,
                                          const std::vector<P2pPointResult>& points);
std::vector<EmittedFile> emit_network_outputs(const ScenarioConfig& cfg,
                                              const std::vector<NetworkPointResult>& points);
std::vector<EmittedFile> emit_cluster_outputs(const ScenarioConfig& cfg,
                                              const std::vector<ClusterPointResult>& points);

void write_emitted_files(const std::string& dir, const std::vector<EmittedFile>& files);

} // namespace gewi
