#pragma once

#include <vector>

#include "cfmimo/channel.hpp"
#include "cfmimo/clustering.hpp"
#include "cfmimo/social.hpp"

namespace cfmimo::baselines {

/// Each UE connects only to its strongest-norm AP; ties to the lower index.
/// May exceed the per-AP cap, in which case the hybrid precoder path applies.
ClusteringMatrix best_channel(const channel::ChannelRealization& channels);

/// All-ones clustering: every UE on every AP.
ClusteringMatrix canonical(int n_ues, int n_aps);

/// Two-phase quota-respecting heuristic: best-AP association first, then
/// cluster expansion onto unsaturated APs in descending norm order.
ClusteringMatrix matched_decision(const channel::ChannelRealization& channels,
                                  int k_max, int m_max);

struct WoaConfig {
    int population = 50;
    int epochs = 100;
    double ee_target = 35e6;   // bits/joule
    double spiral_b = 1.0;
    bool feedback = true;      // worst-decile re-injection on stagnation
    int stagnation_window = 10;

    void validate() const;
};

struct WoaResult {
    ClusteringMatrix best;
    double best_fitness = 0.0;
    std::vector<double> history;  // best-so-far fitness per epoch
};

/// Scalar fitness maximized by the whale search: total QoS satisfaction plus
/// per-cluster efficiencies normalized against the target.
double woa_fitness(const social::Outcome& outcome, double ee_target);

WoaResult woa(const social::UtilityOracle& oracle, const WoaConfig& config,
              const channel::ChannelRealization& channels, int k_max, int m_max,
              Rng& rng);

}  // namespace cfmimo::baselines
