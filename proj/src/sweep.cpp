#include "gewi/sweep.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <thread>

#include "gewi/csv.hpp"
#include "gewi/svg.hpp"

namespace gewi {

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

namespace {

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs `count` independent tasks on a small pool. Tasks write into
// preallocated slots, so the result order is by index regardless of timing.
void run_tasks(int workers, std::size_t count, const std::function<void(std::size_t)>& task) {
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const int n = std::min<int>(workers, static_cast<int>(count));
    pool.reserve(static_cast<std::size_t>(n));
    for (int w = 0; w < n; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                task(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

std::string p2p_point_key(const ScenarioConfig& cfg, const std::string& noise,
                          const std::string& policy, std::size_t memory, double r,
                          const char* scenario) {
    return std::string(scenario) + "|noise=" + noise + "|policy=" + policy +
           "|E=" + std::to_string(memory) + "|r=" + format_double(r) +
           "|J=" + std::to_string(cfg.link.job_bits) + "|L=" + std::to_string(cfg.link.buffer_bits) +
           "|ticks=" + std::to_string(cfg.link.total_ticks);
}

LinkConfig point_link_config(const ScenarioConfig& cfg, const NoiseChoice& noise,
                             const PolicyChoice& policy, std::size_t memory, double r) {
    LinkConfig lc = cfg.link;
    lc.noise = noise.params;
    lc.overflow = policy.overflow;
    lc.consume = policy.consume;
    lc.memory_slots = memory;
    lc.arrival_prob = r;
    return lc;
}

template <typename Point>
void expand_p2p_like_points(const ScenarioConfig& cfg, const char* scenario,
                            std::vector<Point>& points) {
    const std::vector<std::size_t> memories =
        cfg.memory_sweep.empty() ? std::vector<std::size_t>{cfg.link.memory_slots}
                                 : cfg.memory_sweep;
    for (const auto& policy : cfg.policies) {
        for (const auto& noise : cfg.noise_presets) {
            for (std::size_t memory : memories) {
                for (double r : cfg.arrival_probs) {
                    Point p;
                    p.noise_name = noise.name;
                    p.policy_name = policy.name;
                    p.memory_slots = memory;
                    p.arrival_prob = r;
                    p.point_key = p2p_point_key(cfg, noise.name, policy.name, memory, r, scenario);
                    points.push_back(std::move(p));
                }
            }
        }
    }
    // Entanglement-free reference: E = 0 forces plain transmission.
    if (cfg.include_baseline) {
        for (double r : cfg.arrival_probs) {
            Point p;
            p.noise_name = "classical";
            p.policy_name = "plain";
            p.memory_slots = 0;
            p.arrival_prob = r;
            p.baseline = true;
            p.point_key = p2p_point_key(cfg, "classical", "plain", 0, r, scenario);
            points.push_back(std::move(p));
        }
    }
}

struct AxisMaps {
    NoiseChoice noise;
    PolicyChoice policy;
};

AxisMaps resolve_axes(const ScenarioConfig& cfg, const std::string& noise_name,
                      const std::string& policy_name, bool baseline) {
    if (baseline) return {{"classical", NoiseParams::make_perfect()}, parse_policy_name("filo")};
    AxisMaps a;
    for (const auto& n : cfg.noise_presets)
        if (n.name == noise_name) a.noise = n;
    for (const auto& p : cfg.policies)
        if (p.name == policy_name) a.policy = p;
    return a;
}

} // namespace

std::vector<P2pPointResult> run_p2p_sweep(const ScenarioConfig& cfg) {
    cfg.validate();
    std::vector<P2pPointResult> points;
    expand_p2p_like_points(cfg, "p2p", points);
    const std::size_t reps = static_cast<std::size_t>(cfg.seeds_per_point);
    for (auto& p : points) {
        p.runs.resize(reps);
        for (std::size_t rep = 0; rep < reps; ++rep)
            p.seeds.push_back(derive_run_seed(cfg.master_seed, p.point_key, rep));
    }
    run_tasks(resolve_workers(cfg.workers), points.size() * reps, [&](std::size_t i) {
        P2pPointResult& p = points[i / reps];
        const std::size_t rep = i % reps;
        const AxisMaps axes = resolve_axes(cfg, p.noise_name, p.policy_name, p.baseline);
        LinkConfig lc = point_link_config(cfg, axes.noise, axes.policy, p.memory_slots,
                                          p.arrival_prob);
        lc.collect_trace = cfg.trace && rep == 0;
        LinkRunResult r = run_link(lc, p.seeds[rep]);
        p.runs[rep] = r.metrics;
        if (lc.collect_trace) p.trace = std::move(r.trace);
    });
    for (auto& p : points) {
        std::vector<double> errs, thrs;
        for (const auto& m : p.runs) {
            errs.push_back(m.message_error_rate);
            thrs.push_back(m.throughput_bits_per_tick);
        }
        p.mean_error = mean_of(errs);
        p.std_error = std_of(errs);
        p.mean_throughput = mean_of(thrs);
        p.std_throughput = std_of(thrs);
    }
    return points;
}

std::vector<NetworkPointResult> run_network_sweep(const ScenarioConfig& cfg) {
    cfg.validate();
    std::vector<NetworkPointResult> points;
    expand_p2p_like_points(cfg, "network", points);
    const std::size_t reps = static_cast<std::size_t>(cfg.seeds_per_point);
    for (auto& p : points) {
        p.runs.resize(reps);
        for (std::size_t rep = 0; rep < reps; ++rep)
            p.seeds.push_back(derive_run_seed(cfg.master_seed, p.point_key, rep));
    }
    run_tasks(resolve_workers(cfg.workers), points.size() * reps, [&](std::size_t i) {
        NetworkPointResult& p = points[i / reps];
        const std::size_t rep = i % reps;
        const AxisMaps axes = resolve_axes(cfg, p.noise_name, p.policy_name, p.baseline);
        const LinkConfig lc = point_link_config(cfg, axes.noise, axes.policy, p.memory_slots,
                                                p.arrival_prob);
        p.runs[rep] = run_network(make_topology(cfg, lc), p.seeds[rep]);
    });
    for (auto& p : points) {
        std::vector<double> errs, thrs;
        for (const auto& m : p.runs) {
            errs.push_back(m.message_error_rate);
            thrs.push_back(m.throughput_bits_per_tick);
        }
        p.mean_error = mean_of(errs);
        p.std_error = std_of(errs);
        p.mean_throughput = mean_of(thrs);
        p.std_throughput = std_of(thrs);
    }
    return points;
}

std::vector<ClusterPointResult> run_cluster_sweep(const ScenarioConfig& cfg) {
    cfg.validate();
    std::vector<ClusterPointResult> points;
    for (const auto& noise : cfg.cluster_noise) {
        for (int pairs : cfg.pairs_sweep) {
            ClusterPointResult p;
            p.noise_name = noise.name;
            p.pairs = pairs;
            p.point_key = "cluster|noise=" + noise.name + "|pairs=" + std::to_string(pairs) +
                          "|n=" + std::to_string(cfg.cluster.n_points) +
                          "|iters=" + std::to_string(cfg.cluster.max_iterations);
            points.push_back(std::move(p));
        }
    }
    const std::size_t reps = static_cast<std::size_t>(cfg.repetitions);
    for (auto& p : points) {
        p.runs.resize(reps);
        for (std::size_t rep = 0; rep < reps; ++rep)
            p.seeds.push_back(derive_run_seed(cfg.master_seed, p.point_key, rep));
    }
    run_tasks(resolve_workers(cfg.workers), points.size() * reps, [&](std::size_t i) {
        ClusterPointResult& p = points[i / reps];
        const std::size_t rep = i % reps;
        ClusterConfig cc = cfg.cluster;
        cc.pairs_per_iteration = p.pairs;
        for (const auto& n : cfg.cluster_noise)
            if (n.name == p.noise_name) cc.noise = n.params;
        p.runs[rep] = run_distributed_kmeans(cc, p.seeds[rep]);
    });
    for (auto& p : points) {
        std::vector<double> f1s, txs;
        for (const auto& r : p.runs) {
            f1s.push_back(r.f1);
            txs.push_back(static_cast<double>(r.total_transmissions));
        }
        p.mean_f1 = mean_of(f1s);
        p.std_f1 = std_of(f1s);
        p.mean_transmissions = mean_of(txs);
        p.std_transmissions = std_of(txs);
    }
    return points;
}

namespace {

// One curve per (noise, policy, E) series, baseline drawn dashed.
template <typename Point>
SvgPlot series_plot(const std::vector<Point>& points, const std::string& title,
                    const std::string& y_label, double Point::* value) {
    SvgPlot plot;
    plot.title = title;
    plot.x_label = "message arrival probability r";
    plot.y_label = y_label;
    std::map<std::string, std::size_t> series_index;
    for (const auto& p : points) {
        std::string name = p.baseline
                               ? "classical (E=0)"
                               : p.noise_name + " " + p.policy_name + " E=" +
                                     std::to_string(p.memory_slots);
        auto [it, inserted] = series_index.emplace(name, plot.series.size());
        if (inserted) {
            PlotSeries s;
            s.name = name;
            s.style = p.baseline ? LineStyle::Dashed : LineStyle::Solid;
            s.color = p.baseline ? "#000000" : plot_color(plot.series.size());
            plot.series.push_back(std::move(s));
        }
        plot.series[it->second].points.emplace_back(p.arrival_prob, p.*value);
    }
    return plot;
}

} // namespace

std::vector<EmittedFile> emit_p2p_outputs(const ScenarioConfig& cfg,
                                          const std::vector<P2pPointResult>& points) {
    std::vector<EmittedFile> files;

    CsvWriter runs({"schema", "point_key", "noise", "t1_ns", "t2_ns", "policy", "memory_slots",
                    "buffer_bits", "job_bits", "arrival_prob", "seed_index", "run_seed", "ticks",
                    "offered", "accepted", "dropped", "delivered", "assisted", "plain",
                    "bits_delivered", "wrong", "error_rate", "throughput_bits_per_tick",
                    "throughput_mbps", "pairs_generated", "pairs_stored", "pairs_dropped_new",
                    "pairs_consumed", "pairs_evicted", "pairs_remaining", "no_deliveries"});
    for (const auto& p : points) {
        const NoiseParams noise = resolve_axes(cfg, p.noise_name, p.policy_name, p.baseline)
                                      .noise.params;
        for (std::size_t i = 0; i < p.runs.size(); ++i) {
            const RunMetrics& m = p.runs[i];
            runs.field("p2p_runs-v1")
                .field(p.point_key)
                .field(p.noise_name)
                .field(noise.perfect ? 0.0 : noise.t1_ns)
                .field(noise.perfect ? 0.0 : noise.t2_ns)
                .field(p.policy_name)
                .field(static_cast<std::int64_t>(p.memory_slots))
                .field(cfg.link.buffer_bits)
                .field(cfg.link.job_bits)
                .field(p.arrival_prob)
                .field(static_cast<std::int64_t>(i))
                .field(p.seeds[i])
                .field(m.ticks)
                .field(m.messages_offered)
                .field(m.messages_accepted)
                .field(m.messages_dropped)
                .field(m.messages_delivered)
                .field(m.assisted_messages)
                .field(m.plain_messages)
                .field(m.bits_delivered)
                .field(m.wrong_messages)
                .field(m.message_error_rate)
                .field(m.throughput_bits_per_tick)
                .field(m.throughput_mbps)
                .field(m.pairs_generated)
                .field(m.pairs_stored)
                .field(m.pairs_dropped_new)
                .field(m.pairs_consumed)
                .field(m.pairs_evicted)
                .field(m.pairs_remaining)
                .field(m.no_deliveries);
            runs.end_row();
        }
    }
    files.emplace_back("p2p_runs.csv", runs.str());

    CsvWriter summary({"schema", "noise", "policy", "memory_slots", "arrival_prob", "n_runs",
                       "mean_error", "std_error", "mean_throughput_bits_per_tick",
                       "std_throughput_bits_per_tick", "mean_throughput_mbps"});
    for (const auto& p : points) {
        summary.field("p2p_summary-v1")
            .field(p.noise_name)
            .field(p.policy_name)
            .field(static_cast<std::int64_t>(p.memory_slots))
            .field(p.arrival_prob)
            .field(static_cast<std::int64_t>(p.runs.size()))
            .field(p.mean_error)
            .field(p.std_error)
            .field(p.mean_throughput)
            .field(p.std_throughput)
            .field(p.mean_throughput * 1000.0 / static_cast<double>(cfg.link.tick_period_ns));
        summary.end_row();
    }
    files.emplace_back("p2p_summary.csv", summary.str());

    if (cfg.trace) {
        CsvWriter trace({"schema", "point_key", "seq", "start_tick", "arrival_time_ns", "mode",
                         "sent", "decoded", "error", "pair_ids", "pair_ages_ns"});
        for (const auto& p : points) {
            for (const auto& t : p.trace) {
                std::string sent, decoded, ids, ages;
                for (auto b : t.sent) sent += static_cast<char>('0' + b);
                for (auto b : t.decoded) decoded += static_cast<char>('0' + b);
                for (std::size_t k = 0; k < t.pair_ids.size(); ++k) {
                    if (k) { ids += ';'; ages += ';'; }
                    ids += std::to_string(t.pair_ids[k]);
                    ages += std::to_string(t.pair_ages_ns[k]);
                }
                trace.field("p2p_trace-v1")
                    .field(p.point_key)
                    .field(t.seq)
                    .field(t.start_tick)
                    .field(t.arrival_time_ns)
                    .field(t.mode == TxMode::Assisted ? "assisted" : "plain")
                    .field(sent)
                    .field(decoded)
                    .field(t.error)
                    .field(ids)
                    .field(ages);
                trace.end_row();
            }
        }
        files.emplace_back("p2p_trace.csv", trace.str());
    }

    files.emplace_back(
        "p2p_throughput_vs_r.svg",
        series_plot(points, "Point-to-point average throughput", "throughput (bits per tick)",
                    &P2pPointResult::mean_throughput)
            .render());
    files.emplace_back("p2p_error_vs_r.svg",
                       series_plot(points, "Point-to-point message error rate",
                                   "message error rate", &P2pPointResult::mean_error)
                           .render());
    return files;
}

std::vector<EmittedFile> emit_network_outputs(const ScenarioConfig& cfg,
                                              const std::vector<NetworkPointResult>& points) {
    std::vector<EmittedFile> files;
    CsvWriter runs({"schema", "point_key", "noise", "t1_ns", "t2_ns", "policy", "memory_slots",
                    "buffer_bits", "job_bits", "arrival_prob", "seed_index", "run_seed", "ticks",
                    "offered", "accepted", "dropped", "relay_dropped", "delivered", "wrong",
                    "error_rate", "throughput_bits_per_tick", "throughput_mbps",
                    "assisted_total", "plain_total", "pairs_generated_total",
                    "pairs_consumed_total"});
    for (const auto& p : points) {
        const NoiseParams noise = resolve_axes(cfg, p.noise_name, p.policy_name, p.baseline)
                                      .noise.params;
        for (std::size_t i = 0; i < p.runs.size(); ++i) {
            const NetworkMetrics& m = p.runs[i];
            std::int64_t assisted = 0, plain = 0, gen = 0, cons = 0;
            for (const auto& l : m.per_link) {
                assisted += l.assisted_messages;
                plain += l.plain_messages;
                gen += l.pairs_generated;
                cons += l.pairs_consumed;
            }
            runs.field("network_runs-v1")
                .field(p.point_key)
                .field(p.noise_name)
                .field(noise.perfect ? 0.0 : noise.t1_ns)
                .field(noise.perfect ? 0.0 : noise.t2_ns)
                .field(p.policy_name)
                .field(static_cast<std::int64_t>(p.memory_slots))
                .field(cfg.link.buffer_bits)
                .field(cfg.link.job_bits)
                .field(p.arrival_prob)
                .field(static_cast<std::int64_t>(i))
                .field(p.seeds[i])
                .field(m.ticks)
                .field(m.messages_offered)
                .field(m.messages_accepted)
                .field(m.messages_dropped)
                .field(m.relay_dropped)
                .field(m.messages_delivered)
                .field(m.wrong_messages)
                .field(m.message_error_rate)
                .field(m.throughput_bits_per_tick)
                .field(m.throughput_mbps)
                .field(assisted)
                .field(plain)
                .field(gen)
                .field(cons);
            runs.end_row();
        }
    }
    files.emplace_back("network_runs.csv", runs.str());

    CsvWriter summary({"schema", "noise", "policy", "memory_slots", "arrival_prob", "n_runs",
                       "mean_error", "std_error", "mean_throughput_bits_per_tick",
                       "std_throughput_bits_per_tick"});
    for (const auto& p : points) {
        summary.field("network_summary-v1")
            .field(p.noise_name)
            .field(p.policy_name)
            .field(static_cast<std::int64_t>(p.memory_slots))
            .field(p.arrival_prob)
            .field(static_cast<std::int64_t>(p.runs.size()))
            .field(p.mean_error)
            .field(p.std_error)
            .field(p.mean_throughput)
            .field(p.std_throughput);
        summary.end_row();
    }
    files.emplace_back("network_summary.csv", summary.str());

    files.emplace_back("network_throughput_vs_r.svg",
                       series_plot(points, "Network average throughput",
                                   "throughput (bits per tick)",
                                   &NetworkPointResult::mean_throughput)
                           .render());
    files.emplace_back("network_error_vs_r.svg",
                       series_plot(points, "Network end-to-end error rate",
                                   "message error rate", &NetworkPointResult::mean_error)
                           .render());
    return files;
}

std::vector<EmittedFile> emit_cluster_outputs(const ScenarioConfig& cfg,
                                              const std::vector<ClusterPointResult>& points) {
    std::vector<EmittedFile> files;
    CsvWriter runs({"schema", "point_key", "noise", "pairs", "seed_index", "run_seed",
                    "transmissions", "f1", "f1_degenerate", "iterations"});
    for (const auto& p : points) {
        for (std::size_t i = 0; i < p.runs.size(); ++i) {
            const ClusterRunResult& r = p.runs[i];
            runs.field("cluster_runs-v1")
                .field(p.point_key)
                .field(p.noise_name)
                .field(p.pairs)
                .field(static_cast<std::int64_t>(i))
                .field(p.seeds[i])
                .field(r.total_transmissions)
                .field(r.f1)
                .field(r.f1_degenerate)
                .field(r.iterations);
            runs.end_row();
        }
    }
    files.emplace_back("cluster_runs.csv", runs.str());

    CsvWriter summary({"schema", "noise", "pairs", "n_runs", "mean_f1", "std_f1",
                       "mean_transmissions", "std_transmissions"});
    for (const auto& p : points) {
        summary.field("cluster_summary-v1")
            .field(p.noise_name)
            .field(p.pairs)
            .field(static_cast<std::int64_t>(p.runs.size()))
            .field(p.mean_f1)
            .field(p.std_f1)
            .field(p.mean_transmissions)
            .field(p.std_transmissions);
        summary.end_row();
    }
    files.emplace_back("cluster_summary.csv", summary.str());

    SvgPlot plot;
    plot.title = "Distributed clustering: label agreement vs. channel use";
    plot.x_label = "EPR pairs generated per iteration";
    plot.y_label = "F1 score";
    plot.y2_label = "total transmissions";
    std::map<std::string, std::size_t> series_index;
    PlotSeries tx;
    tx.name = "transmissions";
    tx.color = "#000000";
    tx.style = LineStyle::Dashed;
    tx.axis = YAxis::Secondary;
    for (const auto& p : points) {
        auto [it, inserted] = series_index.emplace(p.noise_name, plot.series.size());
        if (inserted) {
            PlotSeries s;
            s.name = p.noise_name;
            s.color = plot_color(plot.series.size());
            plot.series.push_back(std::move(s));
        }
        plot.series[it->second].points.emplace_back(static_cast<double>(p.pairs), p.mean_f1);
        // transmissions are drawn once, from the first noise setting's curve
        if (!points.empty() && p.noise_name == points.front().noise_name)
            tx.points.emplace_back(static_cast<double>(p.pairs), p.mean_transmissions);
    }
    plot.series.push_back(std::move(tx));
    files.emplace_back("cluster_f1_transmissions.svg", plot.render());
    (void)cfg;
    return files;
}

void write_emitted_files(const std::string& dir, const std::vector<EmittedFile>& files) {
    std::filesystem::create_directories(dir);
    for (const auto& [name, content] : files) {
        std::ofstream f(std::filesystem::path(dir) / name, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open for writing: " + dir + "/" + name);
        f << content;
    }
}

} // namespace gewi
