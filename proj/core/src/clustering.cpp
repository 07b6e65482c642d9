#include "cfmimo/clustering.hpp"

namespace cfmimo {

int ClusteringMatrix::row_sum(int k) const {
    int s = 0;
    for (int m = 0; m < M_; ++m) s += c_[static_cast<size_t>(k) * M_ + m];
    return s;
}

int ClusteringMatrix::col_sum(int m) const {
    int s = 0;
    for (int k = 0; k < K_; ++k) s += c_[static_cast<size_t>(k) * M_ + m];
    return s;
}

int ClusteringMatrix::num_associations() const {
    int s = 0;
    for (auto v : c_) s += v;
    return s;
}

bool ClusteringMatrix::feasible(int k_max, int m_max) const {
    for (int m = 0; m < M_; ++m)
        if (col_sum(m) > k_max) return false;
    for (int k = 0; k < K_; ++k)
        if (row_sum(k) > m_max) return false;
    return true;
}

std::vector<int> ClusteringMatrix::serving_aps(int k) const {
    std::vector<int> out;
    for (int m = 0; m < M_; ++m)
        if (get(k, m)) out.push_back(m);
    return out;
}

std::vector<int> ClusteringMatrix::served_ues(int m) const {
    std::vector<int> out;
    for (int k = 0; k < K_; ++k)
        if (get(k, m)) out.push_back(k);
    return out;
}

int ClusteringMatrix::num_engaged_aps() const {
    int s = 0;
    for (int m = 0; m < M_; ++m)
        if (col_sum(m) > 0) ++s;
    return s;
}

int ClusteringMatrix::num_associated_ues() const {
    int s = 0;
    for (int k = 0; k < K_; ++k)
        if (row_sum(k) > 0) ++s;
    return s;
}

std::uint64_t ClusteringMatrix::fingerprint() const {
    std::uint64_t h = mix64(static_cast<std::uint64_t>(K_) << 32 | static_cast<std::uint64_t>(M_));
    std::uint64_t word = 0;
    int bits = 0;
    for (auto v : c_) {
        word = (word << 1) | v;
        if (++bits == 64) {
            h = mix64(h ^ word);
            word = 0;
            bits = 0;
        }
    }
    if (bits > 0) h = mix64(h ^ (word | (1ULL << bits)));
    return h;
}

}  // namespace cfmimo
