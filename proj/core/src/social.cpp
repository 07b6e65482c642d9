#include "cfmimo/social.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cfmimo::social {

void SocialityConfig::validate() const {
    if (alpha < 0.0 || alpha > 1.0 || beta < 0.0 || beta > 1.0)
        throw std::invalid_argument("sociality: alpha and beta must be in [0, 1]");
}

double qos_satisfaction(double rate_bits, double request_bits) {
    if (request_bits <= 0.0)
        throw std::invalid_argument("qos_satisfaction: request must be > 0");
    return std::min(1.0, rate_bits / request_bits);
}

namespace {

double social_mix(int k, const std::vector<double>& values, double factor,
                  const char* what) {
    const int K = static_cast<int>(values.size());
    if (K == 1) {
        if (factor < 1.0)
            throw std::invalid_argument(std::string(what) + ": K=1 requires factor 1");
        return values[0];
    }
    double others = 0.0;
    for (int i = 0; i < K; ++i)
        if (i != k) others += values[i];
    return factor * values[k] + (1.0 - factor) / (K - 1) * others;
}

}  // namespace

double ue_utility(int k, const std::vector<double>& rho, double alpha) {
    return social_mix(k, rho, alpha, "ue_utility");
}

double cluster_utility(int k, const std::vector<double>& ee, double beta) {
    return social_mix(k, ee, beta, "cluster_utility");
}

double total_qos(const std::vector<double>& rho) {
    double s = 0.0;
    for (double v : rho) s += v;
    return s;
}

double total_cluster_ee(const std::vector<double>& ee) {
    double s = 0.0;
    for (double v : ee) s += v;
    return s;
}

Outcome evaluate(const ClusteringMatrix& c, const EvaluationContext& ctx) {
    if (!ctx.channels) throw std::invalid_argument("evaluate: no channels in context");
    const int K = c.num_ues();

    const auto alloc = radio::allocate_power(c, ctx.requests, ctx.radio.p_max_tx);
    const auto precoders = radio::build_precoders(c, *ctx.channels, alloc, ctx.radio);
    const double noise = radio::noise_power(ctx.radio.bandwidth, ctx.radio.noise_psd_dbm);

    Outcome out;
    out.rho.resize(K);
    out.rates.resize(K);
    out.cluster_ee.resize(K);
    out.zf_fallbacks = precoders.zf_fallbacks;
    for (int k = 0; k < K; ++k) {
        const double s = radio::sinr(k, c, precoders, *ctx.channels, noise);
        out.rates[k] = radio::rate(s, ctx.radio.bandwidth);
        out.rho[k] = qos_satisfaction(out.rates[k], ctx.requests[k]);
    }

    const auto breakdown = power::compute_breakdown(c, alloc, out.rates, ctx.power);
    out.cluster_power = breakdown.per_cluster;
    out.total_power = breakdown.total;
    out.effective_power = breakdown.effective_total;
    for (int k = 0; k < K; ++k)
        out.cluster_ee[k] = c.row_sum(k) > 0
                                ? power::cluster_ee(out.rates[k], breakdown.per_cluster[k])
                                : 0.0;
    out.associations = c.num_associations();
    out.engaged_aps = c.num_engaged_aps();
    return out;
}

UtilityVector utility_vector(const Outcome& outcome, const SocialityConfig& sociality) {
    const int K = static_cast<int>(outcome.rho.size());
    const double alpha = K == 1 ? 1.0 : sociality.alpha;
    const double beta = K == 1 ? 1.0 : sociality.beta;
    UtilityVector u;
    u.gamma.resize(K);
    u.cluster_util.resize(K);
    for (int k = 0; k < K; ++k) {
        u.gamma[k] = ue_utility(k, outcome.rho, alpha);
        u.cluster_util[k] = cluster_utility(k, outcome.cluster_ee, beta);
    }
    return u;
}

UtilityVector utility_vector(const ClusteringMatrix& c, const EvaluationContext& ctx) {
    return utility_vector(evaluate(c, ctx), ctx.sociality);
}

bool dominates(const UtilityVector& a, const UtilityVector& b) {
    const size_t K = a.gamma.size();
    if (b.gamma.size() != K) throw std::invalid_argument("dominates: dimension mismatch");
    bool strict = false;
    for (size_t k = 0; k < K; ++k) {
        if (a.gamma[k] < b.gamma[k]) return false;
        if (a.cluster_util[k] < b.cluster_util[k]) return false;
        if (a.gamma[k] > b.gamma[k] || a.cluster_util[k] > b.cluster_util[k]) strict = true;
    }
    return strict;
}

std::vector<ClusteringMatrix> pareto_front_bruteforce(const EvaluationContext& ctx,
                                                      int k_max, int m_max) {
    const int K = static_cast<int>(ctx.requests.size());
    const int M = ctx.channels ? ctx.channels->M : 0;
    const int bits = K * M;
    if (bits > 12)
        throw std::invalid_argument("pareto_front_bruteforce: instance too large (K*M > 12)");

    std::vector<ClusteringMatrix> candidates;
    std::vector<UtilityVector> utilities;
    for (std::uint64_t code = 0; code < (1ULL << bits); ++code) {
        ClusteringMatrix c(K, M);
        for (int b = 0; b < bits; ++b)
            if (code & (1ULL << b)) c.set(b / M, b % M, true);
        if (!c.feasible(k_max, m_max)) continue;
        candidates.push_back(c);
        utilities.push_back(utility_vector(c, ctx));
    }

    std::vector<ClusteringMatrix> front;
    for (size_t i = 0; i < candidates.size(); ++i) {
        bool dominated = false;
        for (size_t j = 0; j < candidates.size() && !dominated; ++j)
            if (j != i && dominates(utilities[j], utilities[i])) dominated = true;
        if (!dominated) front.push_back(candidates[i]);
    }
    return front;
}

}  // namespace cfmimo::social
