#include "cfmimo/power.hpp"

#include <stdexcept>

namespace cfmimo::power {

void PowerModelParams::validate() const {
    if (p_aau_fix < 0.0 || p_fh_fix < 0.0 || p_fh_prec < 0.0 || p_cpu_fix < 0.0 ||
        p_cpu_enc < 0.0)
        throw std::invalid_argument("power: fixed terms must be non-negative");
    if (pa_efficiency <= 0.0 || pa_efficiency > 1.0)
        throw std::invalid_argument("power: PA efficiency must be in (0, 1]");
    if (shutdown_fraction < 0.0 || shutdown_fraction > 1.0)
        throw std::invalid_argument("power: shutdown fraction must be in [0, 1]");
}

double ap_power(int m, const ClusteringMatrix& c, const radio::PowerAllocation& alloc,
                const PowerModelParams& params) {
    double p = params.p_aau_fix + params.p_fh_fix;
    for (int k = 0; k < c.num_ues(); ++k)
        if (c.get(k, m))
            p += alloc.p(k, m) / params.pa_efficiency + params.p_fh_prec;
    return p;
}

double cpu_power(const ClusteringMatrix& c, const std::vector<double>& rates,
                 const PowerModelParams& params) {
    double p = params.p_cpu_fix;
    for (int k = 0; k < c.num_ues(); ++k)
        p += rates[k] * params.p_cpu_enc;
    return p;
}

double total_power(const ClusteringMatrix& c, const radio::PowerAllocation& alloc,
                   const std::vector<double>& rates, const PowerModelParams& params) {
    double p = cpu_power(c, rates, params);
    for (int m = 0; m < c.num_aps(); ++m)
        p += ap_power(m, c, alloc, params);
    return p;
}

double network_ee(const std::vector<double>& rates, double total_watts) {
    double sum = 0.0;
    for (double r : rates) sum += r;
    return sum / total_watts;
}

double cluster_power(int k, const ClusteringMatrix& c, const radio::PowerAllocation& alloc,
                     const std::vector<double>& rates, const PowerModelParams& params) {
    if (c.row_sum(k) == 0) return 0.0;
    const int associated = c.num_associated_ues();
    double p = params.p_cpu_fix / associated + rates[k] * params.p_cpu_enc;
    for (int m = 0; m < c.num_aps(); ++m) {
        if (!c.get(k, m)) continue;
        p += (params.p_aau_fix + params.p_fh_fix) / c.col_sum(m) +
             alloc.p(k, m) / params.pa_efficiency + params.p_fh_prec;
    }
    return p;
}

double cluster_ee(double rate_bits, double cluster_watts) {
    if (cluster_watts <= 0.0) return 0.0;
    return rate_bits / cluster_watts;
}

double effective_power(const ClusteringMatrix& c, double total_watts,
                       const PowerModelParams& params) {
    const int idle = c.num_aps() - c.num_engaged_aps();
    return total_watts - params.shutdown_fraction * params.p_aau_fix * idle;
}

PowerBreakdown compute_breakdown(const ClusteringMatrix& c, const radio::PowerAllocation& alloc,
                                 const std::vector<double>& rates,
                                 const PowerModelParams& params) {
    PowerBreakdown b;
    b.per_ap.resize(c.num_aps());
    for (int m = 0; m < c.num_aps(); ++m)
        b.per_ap[m] = ap_power(m, c, alloc, params);
    b.cpu = cpu_power(c, rates, params);
    b.total = b.cpu;
    for (double p : b.per_ap) b.total += p;
    b.per_cluster.resize(c.num_ues());
    for (int k = 0; k < c.num_ues(); ++k)
        b.per_cluster[k] = cluster_power(k, c, alloc, rates, params);
    b.effective_total = effective_power(c, b.total, params);
    return b;
}

}  // namespace cfmimo::power
