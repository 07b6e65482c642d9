#pragma once

#include <memory>
#include <vector>

#include "cfmimo/channel.hpp"
#include "cfmimo/clustering.hpp"
#include "cfmimo/power.hpp"
#include "cfmimo/radio.hpp"

namespace cfmimo::social {

/// Sociality factors of UEs (alpha) and AP clusters (beta). Both live in
/// [0, 1]: 1 selfish, 1/K egalitarian, 0 altruistic.
struct SocialityConfig {
    double alpha = 1.0;
    double beta = 1.0;

    static SocialityConfig selfish() { return {1.0, 1.0}; }
    static SocialityConfig egalitarian(int n_ues) {
        const double f = n_ues > 1 ? 1.0 / n_ues : 1.0;
        return {f, f};
    }
    static SocialityConfig altruistic() { return {0.0, 0.0}; }
    void validate() const;
};

/// The 2K-dimensional outcome of a clustering: social QoS utilities followed
/// by social cluster-efficiency utilities.
struct UtilityVector {
    std::vector<double> gamma;         // dimensionless, size K
    std::vector<double> cluster_util;  // bits/joule, size K
};

double qos_satisfaction(double rate_bits, double request_bits);

double ue_utility(int k, const std::vector<double>& rho, double alpha);
double cluster_utility(int k, const std::vector<double>& ee, double beta);

double total_qos(const std::vector<double>& rho);
double total_cluster_ee(const std::vector<double>& ee);

/// Raw per-UE pipeline results for one clustering, before the social mix.
struct Outcome {
    std::vector<double> rho;            // QoS satisfaction per UE
    std::vector<double> rates;          // bits/s
    std::vector<double> cluster_ee;     // bits/joule
    std::vector<double> cluster_power;  // watts
    double total_power = 0.0;
    double effective_power = 0.0;
    int associations = 0;
    int engaged_aps = 0;
    int zf_fallbacks = 0;
};

/// Everything needed to evaluate a candidate clustering. Channels and
/// requests are referenced, not copied; keep them alive across evaluations.
struct EvaluationContext {
    const channel::ChannelRealization* channels = nullptr;
    std::vector<double> requests;  // bits/s, size K
    radio::RadioConfig radio;
    power::PowerModelParams power;
    SocialityConfig sociality;
};

/// End-to-end pipeline: power allocation, precoding (CSI side), SINR/rate
/// (true side), power breakdown.
Outcome evaluate(const ClusteringMatrix& c, const EvaluationContext& ctx);

UtilityVector utility_vector(const ClusteringMatrix& c, const EvaluationContext& ctx);
UtilityVector utility_vector(const Outcome& outcome, const SocialityConfig& sociality);

/// Strict Pareto dominance of a over b across all 2K components.
bool dominates(const UtilityVector& a, const UtilityVector& b);

/// Exhaustive Pareto front over all feasible clusterings. Test oracle for
/// tiny instances only; refuses K * M > 12.
std::vector<ClusteringMatrix> pareto_front_bruteforce(const EvaluationContext& ctx,
                                                      int k_max, int m_max);

/// Counting wrapper around evaluate/utility_vector; the single oracle driving
/// matching games and baselines.
class UtilityOracle {
public:
    explicit UtilityOracle(EvaluationContext ctx) : ctx_(std::move(ctx)) {}

    UtilityVector operator()(const ClusteringMatrix& c) const {
        ++calls_;
        return utility_vector(c, ctx_);
    }
    Outcome outcome(const ClusteringMatrix& c) const {
        ++calls_;
        return evaluate(c, ctx_);
    }
    const EvaluationContext& context() const { return ctx_; }
    std::size_t calls() const { return calls_; }

private:
    EvaluationContext ctx_;
    mutable std::size_t calls_ = 0;
};

}  // namespace cfmimo::social
