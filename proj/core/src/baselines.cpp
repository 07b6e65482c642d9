#include "cfmimo/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cfmimo::baselines {

namespace {

/// AP indices sorted by CSI norm toward UE k, descending, ties to lower index.
std::vector<int> aps_by_norm(const channel::ChannelRealization& channels, int k) {
    std::vector<int> order(channels.M);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return channels.h_csi(k, a).norm() > channels.h_csi(k, b).norm();
    });
    return order;
}

}  // namespace

ClusteringMatrix best_channel(const channel::ChannelRealization& channels) {
    ClusteringMatrix c(channels.K, channels.M);
    for (int k = 0; k < channels.K; ++k)
        c.set(k, aps_by_norm(channels, k).front(), true);
    return c;
}

ClusteringMatrix canonical(int n_ues, int n_aps) {
    ClusteringMatrix c(n_ues, n_aps);
    for (int k = 0; k < n_ues; ++k)
        for (int m = 0; m < n_aps; ++m) c.set(k, m, true);
    return c;
}

ClusteringMatrix matched_decision(const channel::ChannelRealization& channels,
                                  int k_max, int m_max) {
    const int K = channels.K;
    const int M = channels.M;
    ClusteringMatrix c(K, M);
    std::vector<int> load(M, 0);

    // Phase 1: best available AP per UE, ascending order, next-best on
    // saturation.
    for (int k = 0; k < K; ++k) {
        for (int m : aps_by_norm(channels, k)) {
            if (load[m] < k_max) {
                c.set(k, m, true);
                ++load[m];
                break;
            }
        }
    }
    // Phase 2: expand onto unsaturated APs in descending norm order until the
    // per-UE cap binds.
    for (int k = 0; k < K; ++k) {
        int size = c.row_sum(k);
        if (size == 0) continue;  // left out in phase 1, no expansion
        for (int m : aps_by_norm(channels, k)) {
            if (size >= m_max) break;
            if (c.get(k, m) || load[m] >= k_max) continue;
            c.set(k, m, true);
            ++load[m];
            ++size;
        }
    }
    return c;
}

void WoaConfig::validate() const {
    if (population < 2) throw std::invalid_argument("woa: population must be >= 2");
    if (epochs < 1) throw std::invalid_argument("woa: epochs must be >= 1");
    if (ee_target <= 0.0) throw std::invalid_argument("woa: ee_target must be > 0");
}

double woa_fitness(const social::Outcome& outcome, double ee_target) {
    double fitness = 0.0;
    for (double r : outcome.rho) fitness += r;
    for (double ee : outcome.cluster_ee) fitness += std::min(1.0, ee / ee_target);
    return fitness;
}

namespace {

struct Whale {
    Eigen::MatrixXd position;  // K x M, clamped to [0, 1]
    ClusteringMatrix binary;
    double fitness = 0.0;
};

/// Threshold at 0.5 and repair to feasibility: drop lowest-position entries
/// past a quota, reconnect empty UEs to their strongest AP with spare quota.
ClusteringMatrix binarize(const Eigen::MatrixXd& position,
                          const channel::ChannelRealization& channels, int k_max,
                          int m_max) {
    const int K = static_cast<int>(position.rows());
    const int M = static_cast<int>(position.cols());
    ClusteringMatrix c(K, M);
    for (int k = 0; k < K; ++k)
        for (int m = 0; m < M; ++m)
            if (position(k, m) >= 0.5) c.set(k, m, true);

    for (int k = 0; k < K; ++k) {
        while (c.row_sum(k) > m_max) {
            int drop = -1;
            for (int m = 0; m < M; ++m)
                if (c.get(k, m) && (drop < 0 || position(k, m) < position(k, drop)))
                    drop = m;
            c.set(k, drop, false);
        }
    }
    for (int m = 0; m < M; ++m) {
        while (c.col_sum(m) > k_max) {
            int drop = -1;
            for (int k = 0; k < K; ++k)
                if (c.get(k, m) && (drop < 0 || position(k, m) < position(drop, m)))
                    drop = k;
            c.set(drop, m, false);
        }
    }
    for (int k = 0; k < K; ++k) {
        if (c.row_sum(k) > 0) continue;
        for (int m : aps_by_norm(channels, k))
            if (c.col_sum(m) < k_max) {
                c.set(k, m, true);
                break;
            }
    }
    return c;
}

Eigen::MatrixXd init_position(const channel::ChannelRealization& channels, int k_max,
                              int m_max, Rng& rng) {
    const int K = channels.K;
    const int M = channels.M;
    std::uniform_int_distribution<int> size_dist(1, m_max);
    Eigen::MatrixXd pos = Eigen::MatrixXd::Zero(K, M);
    std::vector<int> load(M, 0);
    for (int k = 0; k < K; ++k) {
        const int desired = std::min(size_dist(rng), M);
        int placed = 0;
        for (int m : aps_by_norm(channels, k)) {
            if (placed >= desired) break;
            if (load[m] >= k_max) continue;
            pos(k, m) = 1.0;
            ++load[m];
            ++placed;
        }
    }
    return pos;
}

}  // namespace

WoaResult woa(const social::UtilityOracle& oracle, const WoaConfig& config,
              const channel::ChannelRealization& channels, int k_max, int m_max,
              Rng& rng) {
    config.validate();
    const int K = channels.K;
    const int M = channels.M;
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    auto score = [&](Whale& w) {
        w.binary = binarize(w.position, channels, k_max, m_max);
        w.fitness = woa_fitness(oracle.outcome(w.binary), config.ee_target);
    };

    std::vector<Whale> pod(config.population);
    for (auto& w : pod) {
        w.position = init_position(channels, k_max, m_max, rng);
        score(w);
    }

    WoaResult result;
    const auto best_it = std::max_element(pod.begin(), pod.end(), [](auto& a, auto& b) {
        return a.fitness < b.fitness;
    });
    result.best = best_it->binary;
    result.best_fitness = best_it->fitness;
    Eigen::MatrixXd best_position = best_it->position;

    int stagnant = 0;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        const double a = 2.0 * (1.0 - static_cast<double>(epoch) / config.epochs);
        for (auto& w : pod) {
            const double p = uni(rng);
            Eigen::MatrixXd next(K, M);
            if (p < 0.5) {
                // Per-dimension coefficients; a scalar pair would move every
                // element in lockstep and stall the search on binary codes.
                Eigen::MatrixXd coeff_a(K, M), coeff_c(K, M);
                for (int k = 0; k < K; ++k)
                    for (int m = 0; m < M; ++m) {
                        coeff_a(k, m) = a * (2.0 * uni(rng) - 1.0);
                        coeff_c(k, m) = 2.0 * uni(rng);
                    }
                const double selector = a * (2.0 * uni(rng) - 1.0);
                const Eigen::MatrixXd& ref =
                    std::abs(selector) < 1.0
                        ? best_position
                        : pod[std::uniform_int_distribution<int>(
                              0, config.population - 1)(rng)].position;
                next = ref - coeff_a.cwiseProduct(
                                 (coeff_c.cwiseProduct(ref) - w.position).cwiseAbs());
            } else {
                const double l = 2.0 * uni(rng) - 1.0;
                const double spiral = std::exp(config.spiral_b * l) *
                                      std::cos(2.0 * M_PI * l);
                next = (best_position - w.position).cwiseAbs() * spiral + best_position;
            }
            w.position = next.cwiseMax(0.0).cwiseMin(1.0);
            score(w);
        }

        auto it = std::max_element(pod.begin(), pod.end(), [](auto& a_, auto& b_) {
            return a_.fitness < b_.fitness;
        });
        if (it->fitness > result.best_fitness) {
            result.best_fitness = it->fitness;
            result.best = it->binary;
            best_position = it->position;
            stagnant = 0;
        } else {
            ++stagnant;
        }
        result.history.push_back(result.best_fitness);

        if (config.feedback && stagnant >= config.stagnation_window) {
            std::vector<int> order(pod.size());
            std::iota(order.begin(), order.end(), 0);
            std::sort(order.begin(), order.end(), [&](int x, int y) {
                return pod[x].fitness < pod[y].fitness;
            });
            const int worst = std::max(1, config.population / 10);
            for (int i = 0; i < worst; ++i) {
                // Alternate between the norm-guided seed and a uniform draw so
                // re-seeding can reach codes the heuristic never produces.
                if (i % 2 == 0) {
                    pod[order[i]].position = init_position(channels, k_max, m_max, rng);
                } else {
                    Eigen::MatrixXd pos(K, M);
                    for (int k = 0; k < K; ++k)
                        for (int m = 0; m < M; ++m) pos(k, m) = uni(rng);
                    pod[order[i]].position = pos;
                }
                score(pod[order[i]]);
            }
            stagnant = 0;
        }
    }
    return result;
}

}  // namespace cfmimo::baselines
