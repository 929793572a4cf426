#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "gewi/config.hpp"
#include "gewi/sweep.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<int> workers;
    bool trace = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("-c,--config", o.config_path, "scenario config file (JSON)")->required();
    cmd->add_option("-s,--seed", o.seed, "master seed (overrides config)");
    cmd->add_option("-o,--out", o.out_dir, "output directory (overrides config)");
    cmd->add_option("-w,--workers", o.workers, "worker thread count (0 = hardware)");
    cmd->add_flag("--trace", o.trace, "export a per-message trace CSV (first seed per point)");
}

gewi::ScenarioConfig load_with_overrides(const CommonOpts& o, gewi::ScenarioKind kind) {
    gewi::ScenarioConfig cfg = gewi::load_config(o.config_path);
    cfg.kind = kind;
    if (o.seed) cfg.master_seed = *o.seed;
    if (o.out_dir) cfg.output_dir = *o.out_dir;
    if (o.workers) cfg.workers = *o.workers;
    if (o.trace) cfg.trace = true;
    cfg.validate();
    return cfg;
}

int run_p2p(const CommonOpts& o) {
    const auto cfg = load_with_overrides(o, gewi::ScenarioKind::PointToPoint);
    const auto points = gewi::run_p2p_sweep(cfg);
    gewi::write_emitted_files(cfg.output_dir, gewi::emit_p2p_outputs(cfg, points));
    std::cout << "p2p sweep: " << points.size() << " points x " << cfg.seeds_per_point
              << " seeds -> " << cfg.output_dir << "/p2p_*.{csv,svg}\n";
    return 0;
}

int run_network(const CommonOpts& o) {
    const auto cfg = load_with_overrides(o, gewi::ScenarioKind::Network);
    const auto points = gewi::run_network_sweep(cfg);
    gewi::write_emitted_files(cfg.output_dir, gewi::emit_network_outputs(cfg, points));
    std::cout << "network sweep: " << points.size() << " points x " << cfg.seeds_per_point
              << " seeds -> " << cfg.output_dir << "/network_*.{csv,svg}\n";
    return 0;
}

int run_cluster(const CommonOpts& o) {
    const auto cfg = load_with_overrides(o, gewi::ScenarioKind::Clustering);
    const auto points = gewi::run_cluster_sweep(cfg);
    gewi::write_emitted_files(cfg.output_dir, gewi::emit_cluster_outputs(cfg, points));
    std::cout << "cluster sweep: " << points.size() << " points x " << cfg.repetitions
              << " repetitions -> " << cfg.output_dir << "/cluster_*.{csv,svg}\n";
    return 0;
}

int run_validate(const CommonOpts& o) {
    const gewi::ScenarioConfig cfg = gewi::load_config(o.config_path);
    std::cout << "config ok: scenario=" << gewi::scenario_kind_name(cfg.kind)
              << " master_seed=" << cfg.master_seed << " ticks=" << cfg.link.total_ticks
              << " seeds_per_point=" << cfg.seeds_per_point << "\n";
    if (cfg.kind == gewi::ScenarioKind::Clustering) {
        std::cout << "  cluster: n=" << cfg.cluster.n_points
                  << " pairs_sweep=" << cfg.pairs_sweep.size()
                  << " noise_presets=" << cfg.cluster_noise.size()
                  << " repetitions=" << cfg.repetitions << "\n";
    } else {
        std::cout << "  sweep: r_values=" << cfg.arrival_probs.size()
                  << " noise_presets=" << cfg.noise_presets.size()
                  << " policies=" << cfg.policies.size() << " E="
                  << (cfg.memory_sweep.empty() ? 1 : cfg.memory_sweep.size()) << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"entanglement-buffered channel simulator"};
    app.require_subcommand(1);

    CommonOpts p2p_opts, net_opts, cluster_opts, validate_opts;
    add_common(app.add_subcommand("p2p", "point-to-point sweep"), p2p_opts);
    add_common(app.add_subcommand("network", "diamond-network sweep"), net_opts);
    add_common(app.add_subcommand("cluster", "distributed k-means sweep"), cluster_opts);
    validate_opts.config_path.clear();
    app.add_subcommand("validate", "parse and validate a config")
        ->add_option("-c,--config", validate_opts.config_path, "scenario config file (JSON)")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("p2p")) return run_p2p(p2p_opts);
        if (app.got_subcommand("network")) return run_network(net_opts);
        if (app.got_subcommand("cluster")) return run_cluster(cluster_opts);
        if (app.got_subcommand("validate")) return run_validate(validate_opts);
    } catch (const gewi::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
