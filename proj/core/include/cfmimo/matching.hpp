#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "cfmimo/channel.hpp"
#include "cfmimo/clustering.hpp"
#include "cfmimo/social.hpp"

namespace cfmimo::matching {

/// Two-sided preference lists ranked by CSI channel norm, descending, ties
/// broken by lower index. The metric matrix is kept for audits and for the
/// AP-side waiting-list ordering in the deferred-acceptance game.
struct PreferenceList {
    std::vector<std::vector<int>> ue_prefs;  // K lists of AP indices
    std::vector<std::vector<int>> ap_prefs;  // M lists of UE indices
    Eigen::MatrixXd metric;                  // K x M channel norms
};

PreferenceList build_preferences(const channel::ChannelRealization& channels);

struct MatchingTrace {
    int iterations = 0;
    long requests = 0;
    long rejections = 0;
    long broadcasts = 0;
    long evaluations = 0;  // candidate-matching utility evaluations
    int accepted_swaps = 0;
    int accepted_evolutions = 0;
    bool iteration_bound_exceeded = false;  // soft complexity check, never fatal

    /// Per-accepted-step instrumentation, populated only on request.
    struct Step {
        std::uint64_t fingerprint = 0;
        social::UtilityVector before;
        social::UtilityVector after;
    };
    std::vector<Step> steps;
};

/// Bidirectional quota-checked view of a clustering. Symmetry of the two
/// maps is an invariant maintained by add/remove.
class Matching {
public:
    Matching() = default;
    Matching(int n_ues, int n_aps, int k_max, int m_max);

    int num_ues() const { return K_; }
    int num_aps() const { return M_; }
    int k_max() const { return k_max_; }
    int m_max() const { return m_max_; }

    const std::vector<int>& aps_of(int k) const { return ue_to_aps_[k]; }
    const std::vector<int>& ues_of(int m) const { return ap_to_ues_[m]; }
    bool linked(int k, int m) const;
    int quota_ue(int k) const { return m_max_ - static_cast<int>(ue_to_aps_[k].size()); }
    int quota_ap(int m) const { return k_max_ - static_cast<int>(ap_to_ues_[m].size()); }

    void add_link(int k, int m);     // throws std::logic_error on quota violation
    void remove_link(int k, int m);

    ClusteringMatrix to_clustering() const;
    std::vector<int> associated_ues() const;
    bool invariants_hold() const;

private:
    int K_ = 0;
    int M_ = 0;
    int k_max_ = 0;
    int m_max_ = 0;
    std::vector<std::vector<int>> ue_to_aps_;  // sorted ascending
    std::vector<std::vector<int>> ap_to_ues_;
};

/// Matching plus bookkeeping shared by the game stages: the trace, the
/// associated/unassociated partition, and the consumed working preference
/// lists the evolution stage continues from.
struct GameState {
    Matching matching;
    MatchingTrace trace;
    std::vector<int> associated;    // ascending UE indices
    std::vector<int> unassociated;
    PreferenceList working;         // updated lists after the game stage
};

/// Association primitive: links (k, m), consumes the pair from both working
/// preference lists and broadcasts removals when a quota saturates.
void associate(int m, int k, Matching& matching, PreferenceList& working,
               MatchingTrace& trace);

/// Deferred acceptance: proposal rounds with revocable AP waiting lists;
/// connections are established only at termination.
GameState da_game(const PreferenceList& prefs, int k_max, int m_max);

/// Swap stage following deferred acceptance: applies AP exchanges between UE
/// pairs whenever the full utility vector weakly dominates and strictly
/// improves somewhere.
void social_swap_matching(GameState& state, const social::UtilityOracle& oracle,
                          bool record_steps = false);

/// Early acceptance first matching: immediate accept/reject, then forced
/// association of leftover UEs; every associated UE ends with one AP.
GameState ea_first_matching(const PreferenceList& prefs, int k_max, int m_max);

/// Utility-guided cluster growth after early acceptance.
void cluster_evolution(GameState& state, const social::UtilityOracle& oracle,
                       bool record_steps = false);

GameState run_da(const PreferenceList& prefs, int k_max, int m_max,
                 const social::UtilityOracle& oracle, bool enable_swap,
                 bool record_steps = false);
GameState run_ea(const PreferenceList& prefs, int k_max, int m_max,
                 const social::UtilityOracle& oracle, bool record_steps = false);

/// Tolerant comparisons used for swap/evolution acceptance: absolute 1e-12 on
/// the QoS block, relative 1e-9 on the efficiency block, so floating-point
/// noise cannot fabricate favorable pairs.
bool weak_improvement(const social::UtilityVector& next, const social::UtilityVector& cur);
bool strict_improvement(const social::UtilityVector& next, const social::UtilityVector& cur);

/// Text export: one "k: m1 m2 ..." record per UE plus a summary block.
std::string export_matching(const GameState& state);

}  // namespace cfmimo::matching
