#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cfmimo/config.hpp"
#include "cfmimo/matching.hpp"
#include "cfmimo/results.hpp"
#include "cfmimo/rng.hpp"
#include "cfmimo/social.hpp"

namespace cfmimo::harness {

/// Default AP layout: a uniform grid whose row/column split is the divisor
/// pair of m with the most nearly square cells (5x3 for the stock 15-AP
/// deployment), APs centered in the cells.
std::vector<channel::Position> default_ap_grid(int n_aps, double width, double height);

channel::NetworkGeometry sample_geometry(const SimulationConfig& config, Rng& rng);

/// Traffic requests in bits/s: per UE, an intensity drawn uniformly from the
/// configured set, then a Poisson draw around it in Mb/s, resampled while
/// zero.
std::vector<double> sample_requests(const SimulationConfig& config, Rng& rng);

std::pair<channel::NetworkGeometry, std::vector<double>> sample_deployment(
    const SimulationConfig& config, Rng& rng);

/// Per-deployment state reused across runs: geometry plus large-scale channel
/// statistics (or the externally imported realization).
struct Deployment {
    channel::NetworkGeometry geometry;
    channel::ChannelStatistics stats;
    std::optional<channel::ChannelRealization> external;
};

Deployment make_deployment(const SimulationConfig& config, int deployment_index);

struct RunResult {
    Algorithm algorithm = Algorithm::EA;
    int deployment = 0;
    int run = 0;
    social::Outcome outcome;
    social::UtilityVector utilities;
    matching::MatchingTrace trace;
    int associated_ues = 0;
    int unassociated_ues = 0;
    double wall_seconds = 0.0;

    /// Named scalar metrics fed to aggregation; excludes wall time so that
    /// aggregates are independent of machine and parallelism.
    std::map<std::string, double> metrics() const;
};

struct MetricSummary {
    double mean = 0.0;
    double stddev = 0.0;
    std::vector<double> samples;  // sorted ascending, the empirical CDF support
};

struct AggregateMetrics {
    std::map<std::string, MetricSummary> metrics;
    int num_samples = 0;

    const MetricSummary& at(const std::string& name) const;
};

AggregateMetrics aggregate(const std::vector<const RunResult*>& runs);

RunResult run_once(const SimulationConfig& config, Algorithm algorithm,
                   const Deployment& deployment, int deployment_index, int run_index);
RunResult run_once(const SimulationConfig& config, Algorithm algorithm,
                   int deployment_index, int run_index);

/// Monte-Carlo orchestration: deployments x runs x algorithms with derived
/// independent seeds. Deployments are distributed over a worker pool;
/// reduction is ordered by (deployment, run) index so results are identical
/// for any parallelism degree.
std::map<Algorithm, AggregateMetrics> monte_carlo(const SimulationConfig& config,
                                                  const std::vector<Algorithm>& algorithms,
                                                  int parallelism);

Table sweep_social(const SimulationConfig& config, const std::vector<double>& alpha_grid,
                   const std::vector<double>& beta_grid, int parallelism);
Table sweep_load(const SimulationConfig& config, const std::vector<int>& ue_counts,
                 const std::vector<Algorithm>& algorithms, int parallelism);
Table sweep_nmse(const SimulationConfig& config,
                 const std::vector<std::optional<double>>& nmse_values, int parallelism);
Table shutdown_analysis(const SimulationConfig& config, const std::vector<int>& ue_counts,
                        int parallelism);

}  // namespace cfmimo::harness
