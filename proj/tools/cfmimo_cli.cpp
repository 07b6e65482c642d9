#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cfmimo/baselines.hpp"
#include "cfmimo/harness.hpp"

namespace {

using namespace cfmimo;
using harness::Algorithm;
using harness::SimulationConfig;
using harness::Table;

int default_workers() {
    if (const char* env = std::getenv("CFMIMO_WORKERS")) {
        try {
            const int n = std::stoi(env);
            if (n < 1) throw harness::ConfigError("CFMIMO_WORKERS must be >= 1");
            return n;
        } catch (const harness::ConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw harness::ConfigError(std::string("bad CFMIMO_WORKERS value: ") + env);
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

struct Options {
    std::string config_path;
    std::vector<std::string> overrides;  // key=value
    bool paper_scale = false;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int workers = 0;
    std::string format = "csv";
    std::string output_prefix = "./";
};

SimulationConfig build_config(const Options& opt) {
    SimulationConfig config;
    if (!opt.config_path.empty()) config = harness::load_config(opt.config_path);
    for (const auto& kv : opt.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw harness::ConfigError("override must be key=value: " + kv);
        harness::apply_override(config, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (opt.paper_scale) {
        config.mc_deployments = 100;
        config.runs_per_deployment = 100;
    }
    if (opt.seed_set) config.master_seed = opt.seed;
    config.validate();
    return config;
}

std::string config_echo(const SimulationConfig& c) {
    std::ostringstream os;
    os << "num_aps = " << c.num_aps << "\nnum_ues = " << c.num_ues
       << "\nantennas_per_ap = " << c.channel.antennas_per_ap
       << "\nk_max = " << c.radio.k_max << "\nm_max = " << c.radio.m_max
       << "\nbandwidth = " << c.radio.bandwidth
       << "\ncarrier_frequency = " << c.channel.carrier_frequency
       << "\np_max_tx = " << c.radio.p_max_tx
       << "\nsociality_preset = " << c.sociality_preset << "\nalpha = " << c.alpha
       << "\nbeta = " << c.beta << "\nmc_deployments = " << c.mc_deployments
       << "\nruns_per_deployment = " << c.runs_per_deployment
       << "\nmaster_seed = " << c.master_seed << "\n";
    return os.str();
}

std::vector<Algorithm> parse_algorithms(const std::vector<std::string>& names) {
    std::vector<Algorithm> algos;
    for (const auto& name : names) algos.push_back(harness::algorithm_from_string(name));
    return algos;
}

void emit(const std::string& name, const Table& table, const Options& opt,
          const SimulationConfig& config) {
    harness::emit_results({{name, table}}, opt.format, opt.output_prefix,
                          config_echo(config));
    std::cout << name << ": " << table.rows.size() << " rows written under "
              << opt.output_prefix << " (" << opt.format << ")\n";
}

Table run_table(const SimulationConfig& config, const std::vector<Algorithm>& algorithms,
                int workers) {
    const auto aggregates = harness::monte_carlo(config, algorithms, workers);
    Table table;
    table.header = {"algorithm",        "samples",          "mean_qos",
                    "mean_cluster_ee",  "mean_associations", "mean_network_ee",
                    "mean_total_power", "mean_effective_power"};
    for (Algorithm a : algorithms) {
        const auto& agg = aggregates.at(a);
        table.rows.push_back({harness::to_string(a), std::to_string(agg.num_samples),
                              harness::format_number(agg.at("mean_qos").mean),
                              harness::format_number(agg.at("mean_cluster_ee").mean),
                              harness::format_number(agg.at("associations").mean),
                              harness::format_number(agg.at("network_ee").mean),
                              harness::format_number(agg.at("total_power").mean),
                              harness::format_number(agg.at("effective_power").mean)});
    }
    return table;
}

Table pareto_table(const SimulationConfig& config) {
    if (config.num_ues * config.num_aps > 12)
        throw harness::ConfigError(
            "pareto brute force needs num_ues * num_aps <= 12; shrink the instance");
    Rng rng(derive_seed(config.master_seed, 0, 0, 1000));
    const auto geometry = harness::sample_geometry(config, rng);
    const auto ch = channel::draw_channel(config.channel, geometry, rng);
    Rng run_rng(derive_seed(config.master_seed, 0, 0, 2000));
    social::EvaluationContext ctx;
    ctx.channels = &ch;
    ctx.requests = harness::sample_requests(config, run_rng);
    ctx.radio = config.radio;
    ctx.power = config.power;
    ctx.sociality = config.sociality();
    const auto front =
        social::pareto_front_bruteforce(ctx, config.radio.k_max, config.radio.m_max);

    Table table;
    table.header = {"clustering_bits", "associations", "total_qos", "sum_cluster_ee"};
    for (const auto& c : front) {
        std::string bits;
        for (int k = 0; k < c.num_ues(); ++k)
            for (int m = 0; m < c.num_aps(); ++m) bits += c.get(k, m) ? '1' : '0';
        const auto outcome = social::evaluate(c, ctx);
        table.rows.push_back(
            {bits, std::to_string(outcome.associations),
             harness::format_number(social::total_qos(outcome.rho)),
             harness::format_number(social::total_cluster_ee(outcome.cluster_ee))});
    }
    return table;
}

std::vector<std::optional<double>> parse_nmse(const std::vector<std::string>& values) {
    std::vector<std::optional<double>> out;
    for (const auto& v : values) {
        if (v == "perfect") {
            out.push_back(std::nullopt);
        } else {
            try {
                out.push_back(std::stod(v));
            } catch (const std::exception&) {
                throw harness::ConfigError("bad NMSE value: " + v);
            }
        }
    }
    return out;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"Cell-free MIMO user-centric clustering simulator"};
    app.require_subcommand(1);

    Options opt;
    app.add_option("--config", opt.config_path, "key = value config file");
    app.add_option("--set", opt.overrides, "config override key=value (repeatable)");
    app.add_flag("--paper-scale", opt.paper_scale,
                 "full 100x100 Monte-Carlo budget instead of the 20x5 default");
    auto* seed_opt = app.add_option("--seed", opt.seed, "master seed");
    app.add_option("--workers", opt.workers,
                   "worker threads (default: CFMIMO_WORKERS or hardware)");
    app.add_option("--format", opt.format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--output", opt.output_prefix, "output path prefix");

    auto* cmd_run = app.add_subcommand("run", "single-configuration Monte Carlo");
    std::vector<std::string> algo_names = {"EA"};
    cmd_run->add_option("--algorithms", algo_names, "algorithms: EA DA BC CS MD WOA");

    auto* cmd_social = app.add_subcommand("sweep-social", "alpha/beta grid sweep");
    std::vector<double> alphas, betas;
    cmd_social->add_option("--alphas", alphas, "alpha grid (default 0, 1/K, 1)");
    cmd_social->add_option("--betas", betas, "beta grid (default 0, 1/K, 1)");

    auto* cmd_load = app.add_subcommand("sweep-load", "network load sweep over K");
    std::vector<int> load_ks = {15, 25, 35};
    std::vector<std::string> load_algos = {"EA", "DA", "BC", "CS", "MD"};
    cmd_load->add_option("--ue-counts", load_ks, "UE counts");
    cmd_load->add_option("--algorithms", load_algos, "algorithms to compare");

    auto* cmd_nmse = app.add_subcommand("sweep-nmse", "CSI accuracy sweep");
    std::vector<std::string> nmse_values = {"perfect", "-20", "-10", "0"};
    cmd_nmse->add_option("--nmse", nmse_values, "NMSE values in dB, or 'perfect'");

    auto* cmd_shutdown = app.add_subcommand("shutdown", "idle-AP power saving study");
    std::vector<int> shutdown_ks = {15, 25, 35};
    cmd_shutdown->add_option("--ue-counts", shutdown_ks, "UE counts");

    auto* cmd_pareto =
        app.add_subcommand("pareto", "exhaustive Pareto front on a tiny instance");

    auto* cmd_export = app.add_subcommand("export-channels", "draw and export channels");
    std::string export_path = "channels.csv";
    cmd_export->add_option("--out", export_path, "destination file");

    auto* cmd_import =
        app.add_subcommand("import-channels", "evaluate on an imported realization");
    std::string import_path;
    cmd_import->add_option("--in", import_path, "channel file")->required();

    for (auto* sub : {cmd_run, cmd_social, cmd_load, cmd_nmse, cmd_shutdown, cmd_pareto,
                      cmd_export, cmd_import})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    opt.seed_set = seed_opt->count() > 0;
    if (opt.workers < 1) opt.workers = default_workers();
    auto config = build_config(opt);

    if (*cmd_run) {
        emit("run", run_table(config, parse_algorithms(algo_names), opt.workers), opt,
             config);
    } else if (*cmd_social) {
        const double egal = 1.0 / config.num_ues;
        if (alphas.empty()) alphas = {0.0, egal, 1.0};
        if (betas.empty()) betas = {0.0, egal, 1.0};
        emit("sweep_social", harness::sweep_social(config, alphas, betas, opt.workers),
             opt, config);
    } else if (*cmd_load) {
        emit("sweep_load",
             harness::sweep_load(config, load_ks, parse_algorithms(load_algos),
                                 opt.workers),
             opt, config);
    } else if (*cmd_nmse) {
        emit("sweep_nmse",
             harness::sweep_nmse(config, parse_nmse(nmse_values), opt.workers), opt,
             config);
    } else if (*cmd_shutdown) {
        emit("shutdown", harness::shutdown_analysis(config, shutdown_ks, opt.workers),
             opt, config);
    } else if (*cmd_pareto) {
        emit("pareto", pareto_table(config), opt, config);
    } else if (*cmd_export) {
        const auto deployment = harness::make_deployment(config, 0);
        Rng rng(derive_seed(config.master_seed, 0, 0, 2000));
        const auto ch = deployment.external
                            ? *deployment.external
                            : channel::draw_fading(deployment.stats, rng);
        channel::export_channels(ch, export_path);
        std::cout << "wrote " << ch.K << "x" << ch.M << " channels (" << ch.N
                  << " antennas) to " << export_path << "\n";
    } else if (*cmd_import) {
        harness::apply_override(config, "fading_model", "external");
        harness::apply_override(config, "channel_file", import_path);
        const auto probe = channel::load_external_channels(import_path);
        config.num_ues = probe.K;
        config.num_aps = probe.M;
        config.channel.antennas_per_ap = probe.N;
        config.validate();
        emit("run", run_table(config, {Algorithm::EA}, opt.workers), opt, config);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const harness::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
