#include "gewi/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "gewi/network.hpp"

namespace gewi {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

void expect_object(const json& j, const std::string& ctx) {
    if (!j.is_object()) fail(ctx + ": expected an object");
}

void check_known_keys(const json& j, const std::string& ctx,
                      std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&](const char* a) { return key == a; }) == allowed.end()) {
            fail(ctx + ": unknown key '" + key + "'");
        }
    }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        fail(std::string("invalid value for '") + key + "'");
    }
}

std::vector<double> default_arrival_probs() {
    std::vector<double> r;
    for (int i = 1; i <= 20; ++i) r.push_back(0.05 * i);
    return r;
}

} // namespace

NoiseChoice parse_noise_name(const std::string& name) {
    if (name == "perfect") return {name, NoiseParams::make_perfect()};
    if (name == "11-10ns") return {name, NoiseParams::t1t2(11.0, 10.0)};
    if (name == "110-100ns") return {name, NoiseParams::t1t2(110.0, 100.0)};
    if (name == "1100-1000ns") return {name, NoiseParams::t1t2(1100.0, 1000.0)};
    if (name == "1ms") return {name, NoiseParams::t1t2(1e6, 1e6)};
    if (name == "10ms") return {name, NoiseParams::t1t2(1e7, 1e7)};
    if (name.rfind("t1t2-", 0) == 0) {
        const std::string rest = name.substr(5);
        const auto dash = rest.find('-');
        if (dash == std::string::npos) fail("noise '" + name + "': expected t1t2-<t1_ns>-<t2_ns>");
        double t1 = 0, t2 = 0;
        try {
            t1 = std::stod(rest.substr(0, dash));
            t2 = std::stod(rest.substr(dash + 1));
        } catch (const std::exception&) {
            fail("noise '" + name + "': expected t1t2-<t1_ns>-<t2_ns>");
        }
        NoiseChoice c{name, NoiseParams::t1t2(t1, t2)};
        if (!c.params.valid())
            fail("noise '" + name + "': requires t1 > 0, t2 > 0 and t2 <= 2*t1");
        return c;
    }
    fail("unknown noise preset '" + name +
         "' (expected perfect, 11-10ns, 110-100ns, 1100-1000ns, 1ms, 10ms or t1t2-<t1>-<t2>)");
}

PolicyChoice parse_policy_name(const std::string& name) {
    if (name == "filo") return {name, OverflowPolicy::DropNew, ConsumePolicy::Filo};
    if (name == "fifo") return {name, OverflowPolicy::DropNew, ConsumePolicy::Fifo};
    if (name == "replace-filo") return {name, OverflowPolicy::ReplaceOldest, ConsumePolicy::Filo};
    if (name == "replace-fifo") return {name, OverflowPolicy::ReplaceOldest, ConsumePolicy::Fifo};
    fail("unknown policy '" + name + "' (expected filo, fifo, replace-filo or replace-fifo)");
}

std::string scenario_kind_name(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::PointToPoint: return "p2p";
        case ScenarioKind::Network: return "network";
        case ScenarioKind::Clustering: return "cluster";
    }
    return "?";
}

void ScenarioConfig::validate() const {
    if (seeds_per_point < 1) fail("seeds_per_point must be >= 1");
    if (workers < 0) fail("workers must be >= 0");
    try {
        link.validate();
    } catch (const std::invalid_argument& e) {
        fail(e.what());
    }
    if (kind != ScenarioKind::Clustering) {
        if (arrival_probs.empty()) fail("sweep.arrival_probs: empty sweep axis");
        for (double r : arrival_probs)
            if (r < 0.0 || r > 1.0) fail("sweep.arrival_probs: values must lie in [0, 1]");
        if (noise_presets.empty()) fail("sweep.noise_presets: empty sweep axis");
        if (policies.empty()) fail("sweep.policies: empty sweep axis");
        if (kind == ScenarioKind::Network) {
            if (relay_buffer_jobs < 1) fail("network.relay_buffer_jobs must be >= 1");
            try {
                make_topology(*this, link).validate();
            } catch (const std::invalid_argument& e) {
                fail(e.what());
            }
        }
    } else {
        if (pairs_sweep.empty()) fail("cluster.pairs_sweep: empty sweep axis");
        if (cluster_noise.empty()) fail("cluster.noise_presets: empty sweep axis");
        if (repetitions < 1) fail("cluster.repetitions must be >= 1");
        ClusterConfig probe = cluster;
        for (int p : pairs_sweep) {
            probe.pairs_per_iteration = p;
            try {
                probe.validate();
            } catch (const std::invalid_argument& e) {
                fail(e.what());
            }
        }
    }
}

ScenarioConfig parse_config_text(const std::string& text, const std::string& source_name) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1;
        for (std::size_t i = 0; i < e.byte && i < text.size(); ++i)
            if (text[i] == '\n') ++line;
        fail(source_name + ":" + std::to_string(line) + ": " + e.what());
    }
    expect_object(j, source_name);
    check_known_keys(j, source_name,
                     {"scenario", "output_dir", "master_seed", "seeds_per_point", "workers",
                      "ticks", "trace", "link", "sweep", "network", "cluster"});

    ScenarioConfig cfg;
    const std::string kind = get_or<std::string>(j, "scenario", "p2p");
    if (kind == "p2p") cfg.kind = ScenarioKind::PointToPoint;
    else if (kind == "network") cfg.kind = ScenarioKind::Network;
    else if (kind == "cluster") cfg.kind = ScenarioKind::Clustering;
    else fail("scenario: expected p2p, network or cluster");

    cfg.output_dir = get_or<std::string>(j, "output_dir", "out");
    cfg.master_seed = get_or<std::uint64_t>(j, "master_seed", 1);
    cfg.seeds_per_point = get_or<int>(j, "seeds_per_point", 10);
    cfg.workers = get_or<int>(j, "workers", 0);
    cfg.trace = get_or<bool>(j, "trace", false);
    cfg.link.total_ticks = get_or<std::int64_t>(j, "ticks", 1'000'000);

    // The network uses one channel slot per tick (an assisted message moves
    // two bits per tick); the single link defaults to a whole message per
    // tick. Either can be overridden below.
    if (cfg.kind == ScenarioKind::Network) cfg.link.qubits_per_tick = 1;

    if (j.contains("link")) {
        const json& l = j.at("link");
        expect_object(l, "link");
        check_known_keys(l, "link",
                         {"tick_period_ns", "channel_delay_ns", "qubits_per_tick", "job_bits",
                          "buffer_bits", "memory_slots", "pairs_per_idle_tick", "initial_pairs"});
        cfg.link.tick_period_ns = get_or<TimeNs>(l, "tick_period_ns", cfg.link.tick_period_ns);
        cfg.link.channel_delay_ns =
            get_or<TimeNs>(l, "channel_delay_ns", cfg.link.channel_delay_ns);
        cfg.link.qubits_per_tick = get_or<int>(l, "qubits_per_tick", cfg.link.qubits_per_tick);
        cfg.link.job_bits = get_or<int>(l, "job_bits", cfg.link.job_bits);
        cfg.link.buffer_bits = get_or<std::int64_t>(l, "buffer_bits", cfg.link.buffer_bits);
        cfg.link.memory_slots =
            get_or<std::size_t>(l, "memory_slots", cfg.link.memory_slots);
        cfg.link.pairs_per_idle_tick =
            get_or<int>(l, "pairs_per_idle_tick", cfg.link.pairs_per_idle_tick);
        cfg.link.initial_pairs = get_or<std::size_t>(l, "initial_pairs", cfg.link.initial_pairs);
    }

    cfg.arrival_probs = default_arrival_probs();
    cfg.noise_presets = {parse_noise_name("perfect"), parse_noise_name("11-10ns"),
                         parse_noise_name("110-100ns"), parse_noise_name("1100-1000ns")};
    cfg.policies = {parse_policy_name("filo")};
    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        expect_object(s, "sweep");
        check_known_keys(s, "sweep",
                         {"arrival_probs", "noise_presets", "policies", "memory_slots",
                          "include_baseline"});
        cfg.include_baseline = get_or<bool>(s, "include_baseline", true);
        if (s.contains("arrival_probs"))
            cfg.arrival_probs = s.at("arrival_probs").get<std::vector<double>>();
        if (s.contains("noise_presets")) {
            cfg.noise_presets.clear();
            for (const auto& n : s.at("noise_presets").get<std::vector<std::string>>())
                cfg.noise_presets.push_back(parse_noise_name(n));
        }
        if (s.contains("policies")) {
            cfg.policies.clear();
            for (const auto& p : s.at("policies").get<std::vector<std::string>>())
                cfg.policies.push_back(parse_policy_name(p));
        }
        if (s.contains("memory_slots"))
            cfg.memory_sweep = s.at("memory_slots").get<std::vector<std::size_t>>();
    }

    if (j.contains("network")) {
        const json& n = j.at("network");
        expect_object(n, "network");
        check_known_keys(n, "network", {"relay_buffer_jobs", "nodes", "links"});
        cfg.relay_buffer_jobs = get_or<int>(n, "relay_buffer_jobs", 64);
        if (n.contains("nodes") != n.contains("links"))
            fail("network: nodes and links must be given together");
        if (n.contains("nodes")) {
            cfg.network_nodes = n.at("nodes").get<std::vector<std::string>>();
            for (const auto& role : cfg.network_nodes)
                if (role != "source" && role != "relay" && role != "sink")
                    fail("network.nodes: expected source, relay or sink, got '" + role + "'");
            for (const auto& link : n.at("links")) {
                if (!link.is_array() || link.size() != 2)
                    fail("network.links: each link is a [from, to] pair");
                cfg.network_links.emplace_back(link.at(0).get<int>(), link.at(1).get<int>());
            }
        }
    }

    cfg.pairs_sweep = {25, 50, 75, 100, 125, 250, 500};
    cfg.cluster_noise = {parse_noise_name("10ms"), parse_noise_name("1ms"),
                         parse_noise_name("1100-1000ns")};
    if (j.contains("cluster")) {
        const json& c = j.at("cluster");
        expect_object(c, "cluster");
        check_known_keys(c, "cluster",
                         {"points", "std_dev", "max_iterations", "memory_slots",
                          "processing_gap_ns", "channel_delay_ns", "repetitions", "pairs_sweep",
                          "noise_presets"});
        cfg.cluster.n_points = get_or<int>(c, "points", cfg.cluster.n_points);
        cfg.cluster.std_dev = get_or<double>(c, "std_dev", cfg.cluster.std_dev);
        cfg.cluster.max_iterations = get_or<int>(c, "max_iterations", cfg.cluster.max_iterations);
        cfg.cluster.memory_slots = get_or<int>(c, "memory_slots", cfg.cluster.memory_slots);
        cfg.cluster.processing_gap_ns =
            get_or<TimeNs>(c, "processing_gap_ns", cfg.cluster.processing_gap_ns);
        cfg.cluster.channel_delay_ns =
            get_or<TimeNs>(c, "channel_delay_ns", cfg.cluster.channel_delay_ns);
        cfg.repetitions = get_or<int>(c, "repetitions", 200);
        if (c.contains("pairs_sweep"))
            cfg.pairs_sweep = c.at("pairs_sweep").get<std::vector<int>>();
        if (c.contains("noise_presets")) {
            cfg.cluster_noise.clear();
            for (const auto& n : c.at("noise_presets").get<std::vector<std::string>>())
                cfg.cluster_noise.push_back(parse_noise_name(n));
        }
    }

    cfg.validate();
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) fail("cannot read config file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str(), path);
}

Topology make_topology(const ScenarioConfig& cfg, const LinkConfig& link) {
    if (cfg.network_nodes.empty()) return Topology::diamond(link, cfg.relay_buffer_jobs);
    Topology t;
    for (const auto& role : cfg.network_nodes) {
        if (role == "source") t.roles.push_back(NodeRole::Source);
        else if (role == "relay") t.roles.push_back(NodeRole::Relay);
        else t.roles.push_back(NodeRole::Sink);
    }
    for (const auto& [from, to] : cfg.network_links) t.links.push_back({from, to});
    t.base = link;
    t.relay_buffer_jobs = cfg.relay_buffer_jobs;
    return t;
}

} // namespace gewi
