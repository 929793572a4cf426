#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "gewi/cluster.hpp"
#include "gewi/link.hpp"

namespace gewi {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ScenarioKind { PointToPoint, Network, Clustering };

struct NoiseChoice {
    std::string name;
    NoiseParams params;
};

struct PolicyChoice {
    std::string name; // filo | fifo | replace-filo | replace-fifo
    OverflowPolicy overflow = OverflowPolicy::DropNew;
    ConsumePolicy consume = ConsumePolicy::Filo;
};

// Full experiment description: one scenario kind, the baseline link
// settings, and the sweep axes expanded by the sweep runner.
struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::PointToPoint;
    std::string output_dir = "out";
    std::uint64_t master_seed = 1;
    int seeds_per_point = 10;
    int workers = 0; // 0 = hardware concurrency
    bool trace = false;

    LinkConfig link; // baseline; total_ticks comes from `ticks`

    // p2p and network sweep axes
    std::vector<double> arrival_probs;
    std::vector<NoiseChoice> noise_presets;
    std::vector<PolicyChoice> policies;
    std::vector<std::size_t> memory_sweep; // optional E axis
    bool include_baseline = true; // append the entanglement-free reference series

    // network extras: node roles and forward links; empty = diamond
    int relay_buffer_jobs = 64;
    std::vector<std::string> network_nodes;
    std::vector<std::pair<int, int>> network_links;

    // clustering
    ClusterConfig cluster;
    std::vector<int> pairs_sweep;
    std::vector<NoiseChoice> cluster_noise;
    int repetitions = 200;

    void validate() const; // throws ConfigError naming the violated invariant
};

// Named noise presets: perfect, 11-10ns, 110-100ns, 1100-1000ns, 1ms, 10ms,
// or parametric "t1t2-<t1_ns>-<t2_ns>". Throws ConfigError for anything else
// or for parameters violating t2 <= 2*t1.
NoiseChoice parse_noise_name(const std::string& name);

PolicyChoice parse_policy_name(const std::string& name);

// Parses and validates a JSON config. Unknown keys are rejected; parse
// errors carry the source name and line.
ScenarioConfig parse_config_text(const std::string& text, const std::string& source_name);
ScenarioConfig load_config(const std::string& path);

// The config-declared network topology (the diamond when none is given),
// with per-link settings taken from `link`.
struct Topology;
Topology make_topology(const ScenarioConfig& cfg, const LinkConfig& link);

std::string scenario_kind_name(ScenarioKind k);

} // namespace gewi
