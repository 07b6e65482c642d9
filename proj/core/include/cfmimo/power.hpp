#pragma once

#include <vector>

#include "cfmimo/clustering.hpp"
#include "cfmimo/radio.hpp"

namespace cfmimo::power {

struct PowerModelParams {
    double p_aau_fix = 40.0;        // W
    double p_fh_fix = 0.825;        // W
    double p_fh_prec = 0.01;        // W
    double p_cpu_fix = 5.0;         // W
    double p_cpu_enc = 1e-10;       // W per bit/s (0.1 W per Gb/s)
    double pa_efficiency = 0.4;
    double shutdown_fraction = 0.30;

    void validate() const;
};

struct PowerBreakdown {
    std::vector<double> per_ap;       // watts, size M
    double cpu = 0.0;
    double total = 0.0;
    std::vector<double> per_cluster;  // watts, size K; 0 for unassociated UEs
    double effective_total = 0.0;     // total minus the symbol-shutdown saving
};

double ap_power(int m, const ClusteringMatrix& c, const radio::PowerAllocation& alloc,
                const PowerModelParams& params);

double cpu_power(const ClusteringMatrix& c, const std::vector<double>& rates,
                 const PowerModelParams& params);

double total_power(const ClusteringMatrix& c, const radio::PowerAllocation& alloc,
                   const std::vector<double>& rates, const PowerModelParams& params);

/// Sum rate over total power, for a single realization. Zero when no UE
/// receives data.
double network_ee(const std::vector<double>& rates, double total_watts);

/// Power attributed to UE k's serving cluster: its share of the CPU fixed
/// power, its encoding power, and for each serving AP a per-UE share of the
/// AP fixed power plus the dedicated transmit and precoding terms. Zero for
/// unassociated UEs.
double cluster_power(int k, const ClusteringMatrix& c, const radio::PowerAllocation& alloc,
                     const std::vector<double>& rates, const PowerModelParams& params);

double cluster_ee(double rate_bits, double cluster_watts);

/// Total power less the symbol-shutdown saving at idle APs.
double effective_power(const ClusteringMatrix& c, double total_watts,
                       const PowerModelParams& params);

PowerBreakdown compute_breakdown(const ClusteringMatrix& c, const radio::PowerAllocation& alloc,
                                 const std::vector<double>& rates,
                                 const PowerModelParams& params);

}  // namespace cfmimo::power
