#pragma once

#include <cstdint>
#include <vector>

#include "cfmimo/rng.hpp"

namespace cfmimo {

/// Binary K x M association matrix; the decision variable of the clustering
/// problem. Feasibility (per-AP and per-UE caps) is a query, not a
/// constructor constraint: the canonical-setup and best-channel baselines
/// intentionally violate it.
class ClusteringMatrix {
public:
    ClusteringMatrix() = default;
    ClusteringMatrix(int n_ues, int n_aps)
        : K_(n_ues), M_(n_aps), c_(static_cast<size_t>(n_ues) * n_aps, 0) {}

    int num_ues() const { return K_; }
    int num_aps() const { return M_; }

    bool get(int k, int m) const { return c_[static_cast<size_t>(k) * M_ + m] != 0; }
    void set(int k, int m, bool v) { c_[static_cast<size_t>(k) * M_ + m] = v ? 1 : 0; }

    int row_sum(int k) const;  // APs serving UE k
    int col_sum(int m) const;  // UEs served by AP m
    int num_associations() const;
    bool feasible(int k_max, int m_max) const;

    std::vector<int> serving_aps(int k) const;
    std::vector<int> served_ues(int m) const;

    /// Engaged APs: those serving at least one UE.
    int num_engaged_aps() const;
    /// Associated UEs: those with a non-empty cluster.
    int num_associated_ues() const;

    std::uint64_t fingerprint() const;

    bool operator==(const ClusteringMatrix& other) const = default;

private:
    int K_ = 0;
    int M_ = 0;
    std::vector<std::uint8_t> c_;
};

}  // namespace cfmimo
