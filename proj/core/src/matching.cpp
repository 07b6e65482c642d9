#include "cfmimo/matching.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cfmimo::matching {

namespace {

constexpr double kGammaTol = 1e-12;
constexpr double kEeRelTol = 1e-9;

bool erase_value(std::vector<int>& v, int value) {
    auto it = std::find(v.begin(), v.end(), value);
    if (it == v.end()) return false;
    v.erase(it);
    return true;
}

void insert_sorted(std::vector<int>& v, int value) {
    v.insert(std::upper_bound(v.begin(), v.end(), value), value);
}

}  // namespace

PreferenceList build_preferences(const channel::ChannelRealization& channels) {
    const int K = channels.K;
    const int M = channels.M;
    PreferenceList prefs;
    prefs.metric.resize(K, M);
    for (int k = 0; k < K; ++k)
        for (int m = 0; m < M; ++m)
            prefs.metric(k, m) = channels.h_csi(k, m).norm();

    prefs.ue_prefs.resize(K);
    for (int k = 0; k < K; ++k) {
        auto& list = prefs.ue_prefs[k];
        list.resize(M);
        for (int m = 0; m < M; ++m) list[m] = m;
        std::stable_sort(list.begin(), list.end(), [&](int a, int b) {
            return prefs.metric(k, a) > prefs.metric(k, b);
        });
    }
    prefs.ap_prefs.resize(M);
    for (int m = 0; m < M; ++m) {
        auto& list = prefs.ap_prefs[m];
        list.resize(K);
        for (int k = 0; k < K; ++k) list[k] = k;
        std::stable_sort(list.begin(), list.end(), [&](int a, int b) {
            return prefs.metric(a, m) > prefs.metric(b, m);
        });
    }
    return prefs;
}

Matching::Matching(int n_ues, int n_aps, int k_max, int m_max)
    : K_(n_ues), M_(n_aps), k_max_(k_max), m_max_(m_max),
      ue_to_aps_(n_ues), ap_to_ues_(n_aps) {}

bool Matching::linked(int k, int m) const {
    return std::binary_search(ue_to_aps_[k].begin(), ue_to_aps_[k].end(), m);
}

void Matching::add_link(int k, int m) {
    if (linked(k, m)) throw std::logic_error("add_link: already matched");
    if (quota_ue(k) <= 0 || quota_ap(m) <= 0)
        throw std::logic_error("add_link: quota exhausted");
    insert_sorted(ue_to_aps_[k], m);
    insert_sorted(ap_to_ues_[m], k);
}

void Matching::remove_link(int k, int m) {
    if (!erase_value(ue_to_aps_[k], m) || !erase_value(ap_to_ues_[m], k))
        throw std::logic_error("remove_link: pair not matched");
}

ClusteringMatrix Matching::to_clustering() const {
    ClusteringMatrix c(K_, M_);
    for (int k = 0; k < K_; ++k)
        for (int m : ue_to_aps_[k]) c.set(k, m, true);
    return c;
}

std::vector<int> Matching::associated_ues() const {
    std::vector<int> out;
    for (int k = 0; k < K_; ++k)
        if (!ue_to_aps_[k].empty()) out.push_back(k);
    return out;
}

bool Matching::invariants_hold() const {
    for (int k = 0; k < K_; ++k) {
        if (static_cast<int>(ue_to_aps_[k].size()) > m_max_) return false;
        for (int m : ue_to_aps_[k])
            if (std::find(ap_to_ues_[m].begin(), ap_to_ues_[m].end(), k) ==
                ap_to_ues_[m].end())
                return false;
    }
    for (int m = 0; m < M_; ++m) {
        if (static_cast<int>(ap_to_ues_[m].size()) > k_max_) return false;
        for (int k : ap_to_ues_[m])
            if (!linked(k, m)) return false;
    }
    return true;
}

void associate(int m, int k, Matching& matching, PreferenceList& working,
               MatchingTrace& trace) {
    matching.add_link(k, m);
    erase_value(working.ap_prefs[m], k);
    erase_value(working.ue_prefs[k], m);
    if (matching.quota_ap(m) == 0) {
        for (int other = 0; other < matching.num_ues(); ++other)
            if (!matching.linked(other, m)) erase_value(working.ue_prefs[other], m);
        ++trace.broadcasts;
    }
    if (matching.quota_ue(k) == 0) {
        for (int ap = 0; ap < matching.num_aps(); ++ap)
            if (!matching.linked(k, ap)) erase_value(working.ap_prefs[ap], k);
        ++trace.broadcasts;
    }
}

GameState da_game(const PreferenceList& prefs, int k_max, int m_max) {
    const int K = static_cast<int>(prefs.ue_prefs.size());
    const int M = static_cast<int>(prefs.ap_prefs.size());
    GameState state;
    state.matching = Matching(K, M, k_max, m_max);
    state.working = prefs;

    auto& ue_lists = state.working.ue_prefs;
    std::vector<std::vector<int>> waiting(M);  // revocable per-AP lists
    std::vector<int> held(K, 0);               // waiting lists containing UE k

    bool proposed = true;
    while (proposed) {
        proposed = false;
        ++state.trace.iterations;
        std::vector<std::vector<int>> applicants(M);
        for (int k = 0; k < K; ++k) {
            if (held[k] >= m_max || ue_lists[k].empty()) continue;
            const int target = ue_lists[k].front();
            ue_lists[k].erase(ue_lists[k].begin());
            applicants[target].push_back(k);
            ++state.trace.requests;
            proposed = true;
        }
        for (int m = 0; m < M; ++m) {
            if (applicants[m].empty()) continue;
            for (int k : applicants[m]) {
                waiting[m].push_back(k);
                ++held[k];
            }
            std::stable_sort(waiting[m].begin(), waiting[m].end(), [&](int a, int b) {
                if (prefs.metric(a, m) != prefs.metric(b, m))
                    return prefs.metric(a, m) > prefs.metric(b, m);
                return a < b;
            });
            while (static_cast<int>(waiting[m].size()) > k_max) {
                --held[waiting[m].back()];
                waiting[m].pop_back();
                ++state.trace.rejections;
            }
        }
    }

    // Deferred establishment from the final waiting lists.
    for (int m = 0; m < M; ++m)
        for (int k : waiting[m]) state.matching.add_link(k, m);
    for (int k = 0; k < K; ++k) {
        if (state.matching.aps_of(k).empty())
            state.unassociated.push_back(k);
        else
            state.associated.push_back(k);
    }
    return state;
}

bool weak_improvement(const social::UtilityVector& next, const social::UtilityVector& cur) {
    const size_t K = cur.gamma.size();
    for (size_t k = 0; k < K; ++k) {
        if (next.gamma[k] < cur.gamma[k] - kGammaTol) return false;
        const double scale = std::max(std::abs(cur.cluster_util[k]),
                                      std::abs(next.cluster_util[k]));
        if (next.cluster_util[k] < cur.cluster_util[k] - kEeRelTol * scale) return false;
    }
    return true;
}

bool strict_improvement(const social::UtilityVector& next, const social::UtilityVector& cur) {
    const size_t K = cur.gamma.size();
    for (size_t k = 0; k < K; ++k) {
        if (next.gamma[k] > cur.gamma[k] + kGammaTol) return true;
        const double scale = std::max(std::abs(cur.cluster_util[k]),
                                      std::abs(next.cluster_util[k]));
        if (next.cluster_util[k] > cur.cluster_util[k] + kEeRelTol * scale) return true;
    }
    return false;
}

namespace {

void record_step(MatchingTrace& trace, bool enabled, const Matching& matching,
                 const social::UtilityVector& before, const social::UtilityVector& after) {
    if (!enabled) return;
    trace.steps.push_back({matching.to_clustering().fingerprint(), before, after});
}

}  // namespace

void social_swap_matching(GameState& state, const social::UtilityOracle& oracle,
                          bool record_steps) {
    Matching& mu = state.matching;
    social::UtilityVector current = oracle(mu.to_clustering());
    int iterations = 0;

    bool found = true;
    while (found) {
        found = false;
        ++iterations;
        for (int k : state.associated) {
            for (int kp : state.associated) {
                if (kp == k) continue;
                const std::vector<int> aps_k = mu.aps_of(k);
                const std::vector<int> aps_kp = mu.aps_of(kp);
                for (int m : aps_k) {
                    for (int mp : aps_kp) {
                        // Exchanging a shared AP or creating a duplicate link
                        // is a no-op; skip.
                        if (m == mp || mu.linked(k, mp) || mu.linked(kp, m)) continue;
                        mu.remove_link(k, m);
                        mu.remove_link(kp, mp);
                        mu.add_link(k, mp);
                        mu.add_link(kp, m);
                        social::UtilityVector swapped = oracle(mu.to_clustering());
                        ++state.trace.evaluations;
                        if (weak_improvement(swapped, current) &&
                            strict_improvement(swapped, current)) {
                            ++state.trace.accepted_swaps;
                            record_step(state.trace, record_steps, mu, current, swapped);
                            current = std::move(swapped);
                            found = true;
                        } else {
                            mu.remove_link(k, mp);
                            mu.remove_link(kp, m);
                            mu.add_link(k, m);
                            mu.add_link(kp, mp);
                        }
                        if (found) break;
                    }
                    if (found) break;
                }
                if (found) break;
            }
            if (found) break;
        }
    }
    state.trace.iterations += iterations;
    if (iterations > mu.m_max()) state.trace.iteration_bound_exceeded = true;
}

GameState ea_first_matching(const PreferenceList& prefs, int k_max, int m_max) {
    const int K = static_cast<int>(prefs.ue_prefs.size());
    const int M = static_cast<int>(prefs.ap_prefs.size());
    GameState state;
    state.matching = Matching(K, M, k_max, m_max);
    state.working = prefs;
    Matching& mu = state.matching;

    std::vector<int> rejected;  // the set R, ascending
    for (int k = 0; k < K; ++k) rejected.push_back(k);
    std::vector<int> next_rank(K, 1);  // m_k, 1-based position in the updated list

    auto in_top_quota = [&](int m, int k) {
        const int q = mu.quota_ap(m);
        const auto& list = state.working.ap_prefs[m];
        const int top = std::min<int>(q, static_cast<int>(list.size()));
        return std::find(list.begin(), list.begin() + top, k) != list.begin() + top;
    };

    bool active = true;
    while (active) {
        active = false;
        ++state.trace.iterations;
        for (int k : std::vector<int>(rejected)) {
            auto& list = state.working.ue_prefs[k];
            if (list.empty()) {
                erase_value(rejected, k);
                state.unassociated.push_back(k);
                continue;
            }
            if (next_rank[k] > static_cast<int>(list.size())) continue;
            const int m = list[next_rank[k] - 1];
            ++state.trace.requests;
            if (mu.quota_ap(m) > 0 && in_top_quota(m, k)) {
                associate(m, k, mu, state.working, state.trace);
                erase_value(rejected, k);
                state.associated.push_back(k);
            } else {
                ++state.trace.rejections;
                ++next_rank[k];
            }
            active = true;
        }
        // Settle once every leftover UE has walked past its list end.
        if (active) continue;
        for (int k : rejected)
            if (!state.working.ue_prefs[k].empty() &&
                next_rank[k] <= static_cast<int>(state.working.ue_prefs[k].size()))
                active = true;
    }

    // Forced association: leftover UEs take the first listed AP with spare
    // quota, in ascending UE order.
    for (int k : std::vector<int>(rejected)) {
        auto& list = state.working.ue_prefs[k];
        int chosen = -1;
        for (int m : list)
            if (mu.quota_ap(m) > 0) {
                chosen = m;
                break;
            }
        erase_value(rejected, k);
        if (chosen >= 0) {
            associate(chosen, k, mu, state.working, state.trace);
            state.associated.push_back(k);
        } else {
            state.unassociated.push_back(k);
        }
    }
    std::sort(state.associated.begin(), state.associated.end());
    std::sort(state.unassociated.begin(), state.unassociated.end());
    return state;
}

void cluster_evolution(GameState& state, const social::UtilityOracle& oracle,
                       bool record_steps) {
    Matching& mu = state.matching;
    social::UtilityVector current = oracle(mu.to_clustering());
    int iterations = 0;

    auto in_top_quota = [&](int m, int k) {
        const int q = mu.quota_ap(m);
        const auto& list = state.working.ap_prefs[m];
        const int top = std::min<int>(q, static_cast<int>(list.size()));
        return std::find(list.begin(), list.begin() + top, k) != list.begin() + top;
    };

    bool changed = true;
    while (changed) {
        changed = false;
        ++iterations;
        for (int k : state.associated) {
            if (mu.quota_ue(k) <= 0) continue;
            const auto& list = state.working.ue_prefs[k];
            if (list.empty()) continue;
            // Walk the updated list from the top; stop at the first accepted
            // association for this UE in this round.
            int rank = 1;
            while (rank <= static_cast<int>(state.working.ue_prefs[k].size())) {
                const int m = state.working.ue_prefs[k][rank - 1];
                ++state.trace.requests;
                if (mu.quota_ap(m) > 0 && in_top_quota(m, k)) {
                    mu.add_link(k, m);
                    social::UtilityVector evolved = oracle(mu.to_clustering());
                    ++state.trace.evaluations;
                    if (weak_improvement(evolved, current) &&
                        strict_improvement(evolved, current)) {
                        mu.remove_link(k, m);
                        associate(m, k, mu, state.working, state.trace);
                        ++state.trace.accepted_evolutions;
                        record_step(state.trace, record_steps, mu, current, evolved);
                        current = std::move(evolved);
                        changed = true;
                        break;
                    }
                    mu.remove_link(k, m);
                }
                ++state.trace.rejections;
                ++rank;
            }
        }
    }
    state.trace.iterations += iterations;
    if (iterations > mu.k_max()) state.trace.iteration_bound_exceeded = true;
}

GameState run_da(const PreferenceList& prefs, int k_max, int m_max,
                 const social::UtilityOracle& oracle, bool enable_swap,
                 bool record_steps) {
    GameState state = da_game(prefs, k_max, m_max);
    if (enable_swap) social_swap_matching(state, oracle, record_steps);
    return state;
}

GameState run_ea(const PreferenceList& prefs, int k_max, int m_max,
                 const social::UtilityOracle& oracle, bool record_steps) {
    GameState state = ea_first_matching(prefs, k_max, m_max);
    cluster_evolution(state, oracle, record_steps);
    return state;
}

std::string export_matching(const GameState& state) {
    std::ostringstream os;
    for (int k = 0; k < state.matching.num_ues(); ++k) {
        os << k << ":";
        for (int m : state.matching.aps_of(k)) os << " " << m;
        os << "\n";
    }
    os << "associated " << state.associated.size() << "\n";
    os << "unassociated " << state.unassociated.size() << "\n";
    os << "connections " << state.matching.to_clustering().num_associations() << "\n";
    os << "iterations " << state.trace.iterations << "\n";
    os << "requests " << state.trace.requests << "\n";
    os << "rejections " << state.trace.rejections << "\n";
    os << "broadcasts " << state.trace.broadcasts << "\n";
    os << "evaluations " << state.trace.evaluations << "\n";
    os << "accepted_swaps " << state.trace.accepted_swaps << "\n";
    os << "accepted_evolutions " << state.trace.accepted_evolutions << "\n";
    return os.str();
}

}  // namespace cfmimo::matching
