#include "cfmimo/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "cfmimo/baselines.hpp"

namespace cfmimo::harness {

std::vector<channel::Position> default_ap_grid(int n_aps, double width, double height) {
    if (n_aps < 1) throw std::invalid_argument("need at least one AP");
    int best_cols = n_aps;
    double best_score = std::numeric_limits<double>::infinity();
    for (int cols = 1; cols <= n_aps; ++cols) {
        if (n_aps % cols != 0) continue;
        const int rows = n_aps / cols;
        const double score = std::abs(width / cols - height / rows);
        if (score < best_score) {
            best_score = score;
            best_cols = cols;
        }
    }
    const int rows = n_aps / best_cols;
    std::vector<channel::Position> grid;
    grid.reserve(n_aps);
    for (int j = 0; j < rows; ++j)
        for (int i = 0; i < best_cols; ++i)
            grid.push_back({(i + 0.5) * width / best_cols, (j + 0.5) * height / rows});
    return grid;
}

channel::NetworkGeometry sample_geometry(const SimulationConfig& config, Rng& rng) {
    channel::NetworkGeometry geo;
    geo.area_width = config.area_width;
    geo.area_height = config.area_height;
    geo.ap_positions = config.ap_positions.empty()
                           ? default_ap_grid(config.num_aps, config.area_width,
                                             config.area_height)
                           : config.ap_positions;
    geo.ap_broadside_angles.assign(geo.ap_positions.size(), 0.0);
    std::uniform_real_distribution<double> ux(0.0, config.area_width);
    std::uniform_real_distribution<double> uy(0.0, config.area_height);
    geo.ue_positions.reserve(config.num_ues);
    for (int k = 0; k < config.num_ues; ++k) geo.ue_positions.push_back({ux(rng), uy(rng)});
    geo.validate();
    return geo;
}

std::vector<double> sample_requests(const SimulationConfig& config, Rng& rng) {
    std::uniform_int_distribution<size_t> pick(0, config.request_intensities_mbps.size() - 1);
    std::vector<double> requests(config.num_ues);
    for (auto& r : requests) {
        std::poisson_distribution<long> poisson(config.request_intensities_mbps[pick(rng)]);
        long mbps = 0;
        while ((mbps = poisson(rng)) == 0) {}
        r = static_cast<double>(mbps) * 1e6;
    }
    return requests;
}

std::pair<channel::NetworkGeometry, std::vector<double>> sample_deployment(
    const SimulationConfig& config, Rng& rng) {
    auto geo = sample_geometry(config, rng);
    auto requests = sample_requests(config, rng);
    return {std::move(geo), std::move(requests)};
}

Deployment make_deployment(const SimulationConfig& config, int deployment_index) {
    Rng rng(derive_seed(config.master_seed, static_cast<std::uint64_t>(deployment_index),
                        0, 1000));
    Deployment dep;
    dep.geometry = sample_geometry(config, rng);
    if (config.channel.fading_model == channel::FadingModel::External) {
        if (config.channel_file.empty())
            throw ConfigError("external fading model needs channel_file");
        dep.external = channel::load_external_channels(
            config.channel_file, config.channel.antennas_per_ap, config.num_ues,
            config.num_aps);
    } else {
        dep.stats = channel::compute_statistics(config.channel, dep.geometry, rng);
    }
    return dep;
}

std::map<std::string, double> RunResult::metrics() const {
    const int K = static_cast<int>(outcome.rho.size());
    const double total_qos = social::total_qos(outcome.rho);
    const double sum_ee = social::total_cluster_ee(outcome.cluster_ee);
    double sum_rate = 0.0;
    for (double r : outcome.rates) sum_rate += r;
    std::map<std::string, double> m;
    m["total_qos"] = total_qos;
    m["mean_qos"] = K > 0 ? total_qos / K : 0.0;
    m["sum_cluster_ee"] = sum_ee;
    m["mean_cluster_ee"] = K > 0 ? sum_ee / K : 0.0;
    m["sum_rate"] = sum_rate;
    m["network_ee"] = outcome.total_power > 0.0 ? sum_rate / outcome.total_power : 0.0;
    m["effective_ee"] =
        outcome.effective_power > 0.0 ? sum_rate / outcome.effective_power : 0.0;
    m["total_power"] = outcome.total_power;
    m["effective_power"] = outcome.effective_power;
    m["associations"] = outcome.associations;
    m["associated_ues"] = associated_ues;
    m["unassociated_ues"] = unassociated_ues;
    m["engaged_aps"] = outcome.engaged_aps;
    m["zf_fallbacks"] = outcome.zf_fallbacks;
    return m;
}

const MetricSummary& AggregateMetrics::at(const std::string& name) const {
    auto it = metrics.find(name);
    if (it == metrics.end()) throw std::out_of_range("no such metric: " + name);
    return it->second;
}

AggregateMetrics aggregate(const std::vector<const RunResult*>& runs) {
    AggregateMetrics agg;
    agg.num_samples = static_cast<int>(runs.size());
    for (const RunResult* run : runs)
        for (const auto& [name, value] : run->metrics())
            agg.metrics[name].samples.push_back(value);
    for (auto& [name, summary] : agg.metrics) {
        double sum = 0.0;
        for (double v : summary.samples) sum += v;
        const size_t n = summary.samples.size();
        summary.mean = n > 0 ? sum / static_cast<double>(n) : 0.0;
        double sq = 0.0;
        for (double v : summary.samples) sq += (v - summary.mean) * (v - summary.mean);
        summary.stddev = n > 1 ? std::sqrt(sq / static_cast<double>(n - 1)) : 0.0;
        std::sort(summary.samples.begin(), summary.samples.end());
    }
    return agg;
}

namespace {

int algorithm_id(Algorithm a) { return static_cast<int>(a); }

ClusteringMatrix solve(const SimulationConfig& config, Algorithm algorithm,
                       const social::UtilityOracle& oracle,
                       const channel::ChannelRealization& ch, int d, int r,
                       matching::MatchingTrace& trace) {
    const int k_max = config.radio.k_max;
    const int m_max = config.radio.m_max;
    switch (algorithm) {
        case Algorithm::EA: {
            auto prefs = matching::build_preferences(ch);
            auto state = matching::run_ea(prefs, k_max, m_max, oracle);
            trace = std::move(state.trace);
            return state.matching.to_clustering();
        }
        case Algorithm::DA: {
            auto prefs = matching::build_preferences(ch);
            auto state =
                matching::run_da(prefs, k_max, m_max, oracle, config.swap_enabled());
            trace = std::move(state.trace);
            return state.matching.to_clustering();
        }
        case Algorithm::BC:
            return baselines::best_channel(ch);
        case Algorithm::CS:
            return baselines::canonical(ch.K, ch.M);
        case Algorithm::MD:
            return baselines::matched_decision(ch, k_max, m_max);
        case Algorithm::WOA: {
            Rng rng(derive_seed(config.master_seed, static_cast<std::uint64_t>(d),
                                static_cast<std::uint64_t>(r),
                                3000 + algorithm_id(algorithm)));
            return baselines::woa(oracle, config.woa, ch, k_max, m_max, rng).best;
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace

RunResult run_once(const SimulationConfig& config, Algorithm algorithm,
                   const Deployment& deployment, int deployment_index, int run_index) {
    const auto t0 = std::chrono::steady_clock::now();
    Rng run_rng(derive_seed(config.master_seed,
                            static_cast<std::uint64_t>(deployment_index),
                            static_cast<std::uint64_t>(run_index), 2000));
    channel::ChannelRealization ch;
    if (deployment.external) {
        ch = *deployment.external;
        if (ch.K != config.num_ues || ch.M != config.num_aps)
            throw std::runtime_error("imported channel dimensions do not match config");
    } else {
        ch = channel::draw_fading(deployment.stats, run_rng);
    }
    auto requests = sample_requests(config, run_rng);
    ch = channel::perturb_csi(ch, config.nmse_db, run_rng);

    social::EvaluationContext ctx;
    ctx.channels = &ch;
    ctx.requests = requests;
    ctx.radio = config.radio;
    ctx.power = config.power;
    ctx.sociality = config.sociality();
    social::UtilityOracle oracle(ctx);

    RunResult result;
    result.algorithm = algorithm;
    result.deployment = deployment_index;
    result.run = run_index;
    const auto clustering =
        solve(config, algorithm, oracle, ch, deployment_index, run_index, result.trace);
    result.outcome = oracle.outcome(clustering);
    result.utilities = social::utility_vector(result.outcome, ctx.sociality);
    result.associated_ues = clustering.num_associated_ues();
    result.unassociated_ues = config.num_ues - result.associated_ues;
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

RunResult run_once(const SimulationConfig& config, Algorithm algorithm,
                   int deployment_index, int run_index) {
    return run_once(config, algorithm, make_deployment(config, deployment_index),
                    deployment_index, run_index);
}

std::map<Algorithm, AggregateMetrics> monte_carlo(const SimulationConfig& config,
                                                  const std::vector<Algorithm>& algorithms,
                                                  int parallelism) {
    config.validate();
    if (algorithms.empty()) throw ConfigError("no algorithms selected");
    const int D = config.mc_deployments;
    const int R = config.runs_per_deployment;

    std::vector<std::vector<RunResult>> per_deployment(D);
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&]() {
        try {
            for (int d = next.fetch_add(1); d < D; d = next.fetch_add(1)) {
                const auto deployment = make_deployment(config, d);
                auto& out = per_deployment[d];
                out.reserve(static_cast<size_t>(R) * algorithms.size());
                for (int r = 0; r < R; ++r)
                    for (Algorithm a : algorithms)
                        out.push_back(run_once(config, a, deployment, d, r));
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    };

    const int n_workers = std::clamp(parallelism, 1, D);
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    // Ordered reduction: (deployment, run) index order regardless of which
    // worker produced the result.
    std::map<Algorithm, AggregateMetrics> aggregates;
    for (Algorithm a : algorithms) {
        std::vector<const RunResult*> runs;
        runs.reserve(static_cast<size_t>(D) * R);
        for (int d = 0; d < D; ++d)
            for (const auto& result : per_deployment[d])
                if (result.algorithm == a) runs.push_back(&result);
        aggregates.emplace(a, aggregate(runs));
    }
    return aggregates;
}

namespace {

std::vector<std::string> summary_row(const AggregateMetrics& agg) {
    return {format_number(agg.at("mean_qos").mean),
            format_number(agg.at("mean_cluster_ee").mean),
            format_number(agg.at("associations").mean),
            format_number(agg.at("network_ee").mean)};
}

}  // namespace

Table sweep_social(const SimulationConfig& config, const std::vector<double>& alpha_grid,
                   const std::vector<double>& beta_grid, int parallelism) {
    Table table;
    table.header = {"alpha", "beta", "mean_qos", "mean_cluster_ee", "mean_associations",
                    "mean_network_ee"};
    for (double alpha : alpha_grid) {
        for (double beta : beta_grid) {
            SimulationConfig cfg = config;
            cfg.alpha = alpha;
            cfg.beta = beta;
            const auto agg = monte_carlo(cfg, {Algorithm::EA}, parallelism)
                                 .at(Algorithm::EA);
            std::vector<std::string> row = {format_number(alpha), format_number(beta)};
            for (auto& cell : summary_row(agg)) row.push_back(std::move(cell));
            table.rows.push_back(std::move(row));
        }
    }
    return table;
}

Table sweep_load(const SimulationConfig& config, const std::vector<int>& ue_counts,
                 const std::vector<Algorithm>& algorithms, int parallelism) {
    Table table;
    table.header = {"num_ues", "algorithm", "mean_qos", "mean_cluster_ee",
                    "mean_associations", "mean_network_ee"};
    for (int k : ue_counts) {
        SimulationConfig cfg = config;
        cfg.num_ues = k;
        const auto aggs = monte_carlo(cfg, algorithms, parallelism);
        for (Algorithm a : algorithms) {
            std::vector<std::string> row = {std::to_string(k), to_string(a)};
            for (auto& cell : summary_row(aggs.at(a))) row.push_back(std::move(cell));
            table.rows.push_back(std::move(row));
        }
    }
    return table;
}

Table sweep_nmse(const SimulationConfig& config,
                 const std::vector<std::optional<double>>& nmse_values, int parallelism) {
    Table table;
    table.header = {"nmse_db", "mean_qos", "mean_cluster_ee", "mean_associations",
                    "mean_network_ee"};
    for (const auto& nmse : nmse_values) {
        SimulationConfig cfg = config;
        cfg.nmse_db = nmse;
        const auto agg = monte_carlo(cfg, {Algorithm::EA}, parallelism).at(Algorithm::EA);
        std::vector<std::string> row = {nmse ? format_number(*nmse)
                                             : std::string("perfect")};
        for (auto& cell : summary_row(agg)) row.push_back(std::move(cell));
        table.rows.push_back(std::move(row));
    }
    return table;
}

Table shutdown_analysis(const SimulationConfig& config, const std::vector<int>& ue_counts,
                        int parallelism) {
    Table table;
    table.header = {"num_ues", "mean_total_power", "mean_effective_power",
                    "mean_network_ee", "mean_effective_ee"};
    for (int k : ue_counts) {
        SimulationConfig cfg = config;
        cfg.num_ues = k;
        const auto agg = monte_carlo(cfg, {Algorithm::EA}, parallelism).at(Algorithm::EA);
        table.rows.push_back({std::to_string(k),
                              format_number(agg.at("total_power").mean),
                              format_number(agg.at("effective_power").mean),
                              format_number(agg.at("network_ee").mean),
                              format_number(agg.at("effective_ee").mean)});
    }
    return table;
}

}  // namespace cfmimo::harness
