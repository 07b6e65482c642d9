#include "cfmimo/radio.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cfmimo::radio {

void RadioConfig::validate() const {
    if (bandwidth <= 0.0) throw std::invalid_argument("radio: bandwidth must be > 0");
    if (p_max_tx <= 0.0) throw std::invalid_argument("radio: p_max_tx must be > 0");
    if (k_max < 1) throw std::invalid_argument("radio: k_max must be >= 1");
    if (m_max < 1) throw std::invalid_argument("radio: m_max must be >= 1");
}

double noise_power(double bandwidth, double noise_psd_dbm) {
    if (bandwidth <= 0.0) throw std::invalid_argument("noise_power: bandwidth must be > 0");
    const double dbm = noise_psd_dbm + 10.0 * std::log10(bandwidth);
    return std::pow(10.0, dbm / 10.0) / 1000.0;
}

PowerAllocation allocate_power(const ClusteringMatrix& c,
                               const std::vector<double>& requests, double p_max) {
    const int K = c.num_ues();
    const int M = c.num_aps();
    if (static_cast<int>(requests.size()) != K)
        throw std::invalid_argument("allocate_power: request count != K");
    for (double r : requests)
        if (r <= 0.0) throw std::invalid_argument("allocate_power: requests must be > 0");

    PowerAllocation alloc;
    alloc.K = K;
    alloc.M = M;
    alloc.tx_power.assign(static_cast<size_t>(K) * M, 0.0);
    for (int m = 0; m < M; ++m) {
        double total = 0.0;
        for (int k = 0; k < K; ++k)
            if (c.get(k, m)) total += requests[k];
        if (total == 0.0) continue;
        for (int k = 0; k < K; ++k)
            if (c.get(k, m))
                alloc.tx_power[static_cast<size_t>(k) * M + m] = requests[k] / total * p_max;
    }
    return alloc;
}

CVector mr_direction(const CVector& h) {
    if (h.squaredNorm() == 0.0) throw std::invalid_argument("mr_direction: zero channel");
    return h;
}

std::vector<CVector> zf_directions(const CMatrix& served_csi, int* fallbacks) {
    const int S = static_cast<int>(served_csi.cols());
    if (S < 1) throw std::invalid_argument("zf_directions: no served UEs");
    if (S > served_csi.rows())
        throw std::invalid_argument("zf_directions: more UEs than antennas");
    CMatrix gram = served_csi.adjoint() * served_csi;
    Eigen::FullPivLU<CMatrix> lu(gram);
    CMatrix v;
    if (lu.isInvertible()) {
        v = served_csi * lu.inverse();
    } else {
        const double ridge = 1e-10 * gram.real().trace() / S;
        CMatrix reg = gram + ridge * CMatrix::Identity(S, S);
        v = served_csi * reg.inverse();
        if (fallbacks) ++*fallbacks;
    }
    std::vector<CVector> out(S);
    for (int i = 0; i < S; ++i) out[i] = v.col(i);
    return out;
}

PrecodingSet build_precoders(const ClusteringMatrix& c, const ChannelRealization& channels,
                             const PowerAllocation& alloc, const RadioConfig& config) {
    const int K = c.num_ues();
    const int M = c.num_aps();
    PrecodingSet set;
    set.K = K;
    set.M = M;
    set.vectors.assign(static_cast<size_t>(K) * M, CVector());

    for (int m = 0; m < M; ++m) {
        const std::vector<int> served = c.served_ues(m);
        if (served.empty()) continue;
        const int S = static_cast<int>(served.size());

        // Pick the ZF subset. All served UEs when capacity allows, otherwise
        // the k_max strongest CSI norms; ties broken by lower UE index.
        std::vector<int> zf_members;
        if (config.precoder == Precoder::LPZF) {
            const int cap = std::min(config.k_max, channels.N);
            if (S <= cap) {
                zf_members = served;
            } else {
                std::vector<int> order(served);
                std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
                    return channels.h_csi(a, m).norm() > channels.h_csi(b, m).norm();
                });
                order.resize(cap);
                std::sort(order.begin(), order.end());
                zf_members = order;
            }
        }

        std::vector<CVector> directions(S);
        if (!zf_members.empty()) {
            CMatrix h_m(channels.N, zf_members.size());
            for (size_t i = 0; i < zf_members.size(); ++i)
                h_m.col(i) = channels.h_csi(zf_members[i], m);
            std::vector<CVector> zf = zf_directions(h_m, &set.zf_fallbacks);
            for (int i = 0; i < S; ++i) {
                auto it = std::find(zf_members.begin(), zf_members.end(), served[i]);
                if (it != zf_members.end())
                    directions[i] = zf[static_cast<size_t>(it - zf_members.begin())];
                else
                    directions[i] = mr_direction(channels.h_csi(served[i], m));
            }
        } else {
            for (int i = 0; i < S; ++i)
                directions[i] = mr_direction(channels.h_csi(served[i], m));
        }

        for (int i = 0; i < S; ++i) {
            const int k = served[i];
            const double p = alloc.p(k, m);
            const double norm = directions[i].norm();
            set.vectors[static_cast<size_t>(k) * M + m] =
                norm > 0.0 ? CVector(std::sqrt(p) / norm * directions[i])
                           : CVector(CVector::Zero(channels.N));
        }
    }
    return set;
}

double sinr(int k, const ClusteringMatrix& c, const PrecodingSet& w,
            const ChannelRealization& channels, double noise_watts) {
    const int M = c.num_aps();
    channel::Complex desired = 0.0;
    for (int m = 0; m < M; ++m)
        if (c.get(k, m)) desired += channels.h(k, m).dot(w.w(k, m));
    const double s = std::norm(desired);
    if (s == 0.0) return 0.0;

    double interference = 0.0;
    for (int j = 0; j < c.num_ues(); ++j) {
        if (j == k) continue;
        channel::Complex leak = 0.0;
        for (int m = 0; m < M; ++m)
            if (c.get(j, m)) leak += channels.h(k, m).dot(w.w(j, m));
        interference += std::norm(leak);
    }
    return s / (interference + noise_watts);
}

double rate(double sinr_value, double bandwidth) {
    return bandwidth * std::log2(1.0 + sinr_value);
}

}  // namespace cfmimo::radio
