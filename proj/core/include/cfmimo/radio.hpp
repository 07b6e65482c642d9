#pragma once

#include <Eigen/Dense>
#include <vector>

#include "cfmimo/channel.hpp"
#include "cfmimo/clustering.hpp"

namespace cfmimo::radio {

using channel::ChannelRealization;
using channel::CMatrix;
using channel::CVector;

enum class Precoder { MR, LPZF };

struct RadioConfig {
    double bandwidth = 100e6;       // Hz
    double noise_psd_dbm = -174.0;  // dBm/Hz
    double p_max_tx = 0.25;         // watts per AP
    int k_max = 12;                 // UEs per AP cap
    int m_max = 6;                  // APs per UE cap
    Precoder precoder = Precoder::LPZF;

    void validate() const;
};

/// Per-link transmit power, watts. Non-negative; serving APs spend exactly
/// p_max_tx in total, idle APs zero.
struct PowerAllocation {
    int K = 0;
    int M = 0;
    std::vector<double> tx_power;  // k * M + m

    double p(int k, int m) const { return tx_power[static_cast<size_t>(k) * M + m]; }
};

/// Precoding vectors for every active (k, m) link, already scaled so that
/// ||w||^2 equals the allocated transmit power.
struct PrecodingSet {
    int K = 0;
    int M = 0;
    std::vector<CVector> vectors;  // k * M + m; empty when c_{k,m} = 0
    int zf_fallbacks = 0;          // rank-deficiency diagnostics

    const CVector& w(int k, int m) const { return vectors[static_cast<size_t>(k) * M + m]; }
};

double noise_power(double bandwidth, double noise_psd_dbm = -174.0);

PowerAllocation allocate_power(const ClusteringMatrix& c,
                               const std::vector<double>& requests, double p_max);

CVector mr_direction(const CVector& h);

/// Pseudo-inverse directions: V = H (H^H H)^{-1}. Falls back to a ridge
/// regularized inverse when the Gram matrix is rank deficient; the caller can
/// observe the fallback count through PrecodingSet.
std::vector<CVector> zf_directions(const CMatrix& served_csi, int* fallbacks = nullptr);

PrecodingSet build_precoders(const ClusteringMatrix& c, const ChannelRealization& channels,
                             const PowerAllocation& alloc, const RadioConfig& config);

/// SINR of UE k, evaluated on the true channels.
double sinr(int k, const ClusteringMatrix& c, const PrecodingSet& w,
            const ChannelRealization& channels, double noise_watts);

double rate(double sinr_value, double bandwidth);

}  // namespace cfmimo::radio
