// End-to-end acceptance gate: one pass/fail line per criterion. Run under
// ctest or standalone; exits nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cfmimo/baselines.hpp"
#include "cfmimo/harness.hpp"
#include "cfmimo/matching.hpp"
#include "helpers.hpp"

using namespace cfmimo;
using test::Scenario;

namespace {

int workers() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

ClusteringMatrix random_feasible(int n_ues, int n_aps, int k_max, int m_max, Rng& rng) {
    ClusteringMatrix c(n_ues, n_aps);
    std::uniform_int_distribution<int> ap_pick(0, n_aps - 1);
    std::uniform_int_distribution<int> size_pick(0, m_max);
    for (int k = 0; k < n_ues; ++k) {
        const int want = size_pick(rng);
        for (int t = 0; t < want * 4 && c.row_sum(k) < want; ++t) {
            const int m = ap_pick(rng);
            if (!c.get(k, m) && c.col_sum(m) < k_max) c.set(k, m, true);
        }
    }
    return c;
}

Scenario random_scenario(int n_ues, int n_aps, Rng& rng, int antennas = 4) {
    auto s = test::random_scenario(n_ues, n_aps, rng, antennas);
    std::uniform_real_distribution<double> req(1e8, 5e8);
    for (double& r : s.ctx.requests) r = req(rng);
    return s;
}

// ---------------------------------------------------------------------------

bool utility_sum_invariance(std::string& detail) {
    Rng rng(1001);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::uniform_real_distribution<double> ee_dist(1e5, 1e8);
    const int K = 30;
    double worst_gamma = 0.0, worst_ee = 0.0;
    for (int rep = 0; rep < 1000; ++rep) {
        std::vector<double> rho(K), ee(K);
        for (double& r : rho) r = uni(rng);
        for (double& e : ee) e = ee_dist(rng);
        const double rho_sum = social::total_qos(rho);
        const double ee_sum = social::total_cluster_ee(ee);
        for (double f : {0.0, 1.0 / K, 0.37, 1.0}) {
            double gs = 0.0, es = 0.0;
            for (int k = 0; k < K; ++k) {
                gs += social::ue_utility(k, rho, f);
                es += social::cluster_utility(k, ee, f);
            }
            worst_gamma = std::max(worst_gamma, std::abs(gs - rho_sum));
            worst_ee = std::max(worst_ee, std::abs(es - ee_sum) / ee_sum);
        }
    }
    std::ostringstream os;
    os << "max |dGamma| " << worst_gamma << ", max rel |dE| " << worst_ee;
    detail = os.str();
    return worst_gamma < 1e-12 && worst_ee < 1e-9;
}

bool power_decomposition(std::string& detail) {
    Rng rng(1002);
    power::PowerModelParams params;
    std::uniform_real_distribution<double> req(1e8, 5e8);
    std::uniform_real_distribution<double> rate(1e7, 1e9);
    double worst = 0.0;
    int checked = 0;
    while (checked < 500) {
        const auto c = random_feasible(30, 15, 12, 6, rng);
        if (c.num_associated_ues() == 0) continue;
        ++checked;
        std::vector<double> requests(30), rates(30, 0.0);
        for (double& r : requests) r = req(rng);
        const auto alloc = radio::allocate_power(c, requests, 0.25);
        for (int k = 0; k < 30; ++k)
            if (c.row_sum(k) > 0) rates[k] = rate(rng);
        double clusters = 0.0;
        for (int k = 0; k < 30; ++k)
            clusters += power::cluster_power(k, c, alloc, rates, params);
        const double idle_fixed =
            (params.p_aau_fix + params.p_fh_fix) * (15 - c.num_engaged_aps());
        const double total = power::total_power(c, alloc, rates, params);
        worst = std::max(worst, std::abs(clusters + idle_fixed - total) / total);
    }
    std::ostringstream os;
    os << "max relative residual " << worst << " over 500 clusterings";
    detail = os.str();
    return worst < 1e-9;
}

bool zf_orthogonality(std::string& detail) {
    Rng rng(1003);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_int_distribution<int> s_pick(1, 12);
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const int S = s_pick(rng);
        channel::CMatrix h(16, S);
        for (int i = 0; i < 16; ++i)
            for (int j = 0; j < S; ++j)
                h(i, j) = channel::Complex(normal(rng), normal(rng));
        const auto v = radio::zf_directions(h);
        for (int i = 0; i < S; ++i)
            for (int j = 0; j < S; ++j) {
                if (i == j) continue;
                worst = std::max(worst, std::abs(h.col(j).dot(v[i])) /
                                            (h.col(j).norm() * v[i].norm()));
            }
    }
    std::ostringstream os;
    os << "max normalized cross term " << worst;
    detail = os.str();
    return worst < 1e-8;
}

std::vector<std::pair<std::string, ClusteringMatrix>> all_algorithm_outputs(
    Scenario& s, int k_max, int m_max, Rng& rng) {
    social::UtilityOracle oracle(s.ctx);
    const auto prefs = matching::build_preferences(s.channels);
    std::vector<std::pair<std::string, ClusteringMatrix>> out;
    out.emplace_back("EA",
                     matching::run_ea(prefs, k_max, m_max, oracle).matching.to_clustering());
    const bool swap = static_cast<int>(s.ctx.requests.size()) < 20;
    out.emplace_back(
        "DA", matching::run_da(prefs, k_max, m_max, oracle, swap).matching.to_clustering());
    out.emplace_back("BC", baselines::best_channel(s.channels));
    out.emplace_back("CS", baselines::canonical(s.channels.K, s.channels.M));
    out.emplace_back("MD", baselines::matched_decision(s.channels, k_max, m_max));
    baselines::WoaConfig woa;
    woa.population = 8;
    woa.epochs = 10;
    out.emplace_back("WOA",
                     baselines::woa(oracle, woa, s.channels, k_max, m_max, rng).best);
    return out;
}

bool transmit_budget(std::string& detail) {
    Rng rng(1004);
    double worst = 0.0;
    for (int n_ues : {10, 25}) {
        auto s = random_scenario(n_ues, 8, rng, 8);
        s.ctx.radio.k_max = 6;
        s.ctx.radio.m_max = 4;
        for (auto& [name, c] : all_algorithm_outputs(s, 6, 4, rng)) {
            const auto alloc = radio::allocate_power(c, s.ctx.requests, 0.25);
            const auto w = radio::build_precoders(c, s.channels, alloc, s.ctx.radio);
            for (int m = 0; m < c.num_aps(); ++m) {
                double spent = 0.0;
                for (int k = 0; k < c.num_ues(); ++k)
                    if (c.get(k, m)) spent += w.w(k, m).squaredNorm();
                if (c.col_sum(m) > 0)
                    worst = std::max(worst, std::abs(spent - 0.25) / 0.25);
                else if (spent != 0.0)
                    return false;
            }
        }
    }
    std::ostringstream os;
    os << "max relative budget error " << worst;
    detail = os.str();
    return worst < 1e-9;
}

bool matching_feasibility(std::string& detail) {
    Rng rng(1005);
    std::uniform_int_distribution<int> kd(2, 10), md(2, 6), qk(1, 5), qm(1, 4);
    int instances = 0;
    for (int rep = 0; rep < 50; ++rep) {
        const int K = kd(rng), M = md(rng), k_max = qk(rng), m_max = qm(rng);
        auto s = random_scenario(K, M, rng);
        s.ctx.radio.k_max = k_max;
        s.ctx.radio.m_max = m_max;
        social::UtilityOracle oracle(s.ctx);
        const auto prefs = matching::build_preferences(s.channels);

        const auto da = matching::run_da(prefs, k_max, m_max, oracle, true);
        const auto ea = matching::run_ea(prefs, k_max, m_max, oracle);
        baselines::WoaConfig woa;
        woa.population = 4;
        woa.epochs = 3;
        const auto wb = baselines::woa(oracle, woa, s.channels, k_max, m_max, rng).best;
        const auto md_out = baselines::matched_decision(s.channels, k_max, m_max);

        for (const auto* state : {&da, &ea}) {
            ++instances;
            if (!state->matching.invariants_hold()) return false;
            if (!state->matching.to_clustering().feasible(k_max, m_max)) return false;
        }
        instances += 2;
        if (!wb.feasible(k_max, m_max) || !md_out.feasible(k_max, m_max)) return false;
    }
    std::ostringstream os;
    os << instances << " matchings checked";
    detail = os.str();
    return instances >= 200;
}

bool monotone_improvement(std::string& detail) {
    Rng rng(1006);
    int instances = 0;
    long steps = 0;
    for (int rep = 0; rep < 50; ++rep) {
        auto s = random_scenario(5, 3, rng);
        s.ctx.radio.k_max = 3;
        s.ctx.radio.m_max = 2;
        social::UtilityOracle oracle(s.ctx);
        const auto prefs = matching::build_preferences(s.channels);
        for (const auto& state : {matching::run_ea(prefs, 3, 2, oracle, true),
                                  matching::run_da(prefs, 3, 2, oracle, true, true)}) {
            ++instances;
            std::set<std::uint64_t> seen;
            for (const auto& step : state.trace.steps) {
                ++steps;
                if (!matching::weak_improvement(step.after, step.before)) return false;
                if (!matching::strict_improvement(step.after, step.before)) return false;
                if (!seen.insert(step.fingerprint).second) return false;
            }
        }
    }
    std::ostringstream os;
    os << instances << " instances, " << steps << " accepted steps";
    detail = os.str();
    return instances >= 100;
}

bool local_optimality(std::string& detail) {
    Rng rng(1007);
    const int k_max = 2, m_max = 2;
    for (int rep = 0; rep < 50; ++rep) {
        auto s = random_scenario(2, 3, rng);
        s.ctx.radio.k_max = k_max;
        s.ctx.radio.m_max = m_max;
        social::UtilityOracle oracle(s.ctx);
        const auto prefs = matching::build_preferences(s.channels);

        // EA output admits no social favorable-association pair.
        auto ea = matching::run_ea(prefs, k_max, m_max, oracle);
        const auto ea_util = oracle(ea.matching.to_clustering());
        for (int k : ea.associated) {
            if (ea.matching.quota_ue(k) <= 0) continue;
            for (int m : ea.working.ue_prefs[k]) {
                const int q = ea.matching.quota_ap(m);
                if (q <= 0) continue;
                const auto& ap_list = ea.working.ap_prefs[m];
                const auto pos = std::find(ap_list.begin(), ap_list.end(), k);
                if (pos == ap_list.end() || pos - ap_list.begin() >= q) continue;
                auto trial = ea.matching;
                trial.add_link(k, m);
                const auto u = oracle(trial.to_clustering());
                if (matching::weak_improvement(u, ea_util) &&
                    matching::strict_improvement(u, ea_util)) {
                    detail = "favorable-association pair left after EA";
                    return false;
                }
            }
        }

        // DA+swap output admits no social swap-blocking pair.
        auto da = matching::run_da(prefs, k_max, m_max, oracle, true);
        const auto da_util = oracle(da.matching.to_clustering());
        for (size_t a = 0; a < da.associated.size(); ++a) {
            for (size_t b = a + 1; b < da.associated.size(); ++b) {
                const int k1 = da.associated[a], k2 = da.associated[b];
                for (int m1 : da.matching.aps_of(k1)) {
                    for (int m2 : da.matching.aps_of(k2)) {
                        if (m1 == m2 || da.matching.linked(k1, m2) ||
                            da.matching.linked(k2, m1))
                            continue;
                        auto trial = da.matching;
                        trial.remove_link(k1, m1);
                        trial.remove_link(k2, m2);
                        trial.add_link(k1, m2);
                        trial.add_link(k2, m1);
                        const auto u = oracle(trial.to_clustering());
                        if (matching::weak_improvement(u, da_util) &&
                            matching::strict_improvement(u, da_util)) {
                            detail = "swap-blocking pair left after DA+swap";
                            return false;
                        }
                    }
                }
            }
        }
    }
    detail = "50 tiny instances exhaustively checked";
    return true;
}

/// Lower end of the bootstrap 95% interval for the mean of `diffs`.
double bootstrap_lower(const std::vector<double>& diffs, Rng& rng) {
    const size_t n = diffs.size();
    std::uniform_int_distribution<size_t> pick(0, n - 1);
    std::vector<double> means(2000);
    for (double& m : means) {
        double acc = 0.0;
        for (size_t i = 0; i < n; ++i) acc += diffs[pick(rng)];
        m = acc / static_cast<double>(n);
    }
    std::sort(means.begin(), means.end());
    return means[static_cast<size_t>(0.025 * means.size())];
}

bool regime_ordering(std::string& detail) {
    harness::SimulationConfig egal;
    egal.num_ues = 30;
    auto selfish = egal;
    selfish.sociality_preset = "selfish";

    std::vector<double> qos_diff, ee_diff;
    for (int d = 0; d < egal.mc_deployments; ++d) {
        const auto dep = harness::make_deployment(egal, d);
        for (int r = 0; r < egal.runs_per_deployment; ++r) {
            const auto a = harness::run_once(egal, harness::Algorithm::EA, dep, d, r);
            const auto b = harness::run_once(selfish, harness::Algorithm::EA, dep, d, r);
            qos_diff.push_back(a.metrics().at("mean_qos") - b.metrics().at("mean_qos"));
            ee_diff.push_back(a.metrics().at("mean_cluster_ee") -
                              b.metrics().at("mean_cluster_ee"));
        }
    }
    Rng rng(1008);
    const double qos_lo = bootstrap_lower(qos_diff, rng);
    const double ee_lo = bootstrap_lower(ee_diff, rng);
    std::ostringstream os;
    os << "95% CI lower bounds: QoS gap " << qos_lo << ", cluster-EE gap " << ee_lo;
    detail = os.str();
    return qos_lo > 0.0 && ee_lo > 0.0;
}

bool association_reduction(std::string& detail) {
    harness::SimulationConfig config;
    config.num_ues = 35;
    const auto aggs = harness::monte_carlo(
        config, {harness::Algorithm::EA, harness::Algorithm::DA}, workers());
    const double ea = aggs.at(harness::Algorithm::EA).at("associations").mean;
    const double da = aggs.at(harness::Algorithm::DA).at("associations").mean;
    std::ostringstream os;
    os << "EA " << ea << " vs DA " << da << " mean connections";
    detail = os.str();
    return ea <= 0.7 * da;
}

bool benchmark_bounds(std::string& detail) {
    std::ostringstream os;
    for (int n_ues : {15, 25, 35}) {
        harness::SimulationConfig config;
        config.num_ues = n_ues;
        config.mc_deployments = 5;
        config.runs_per_deployment = 2;
        const auto aggs = harness::monte_carlo(
            config,
            {harness::Algorithm::EA, harness::Algorithm::DA, harness::Algorithm::MD,
             harness::Algorithm::BC, harness::Algorithm::CS},
            workers());
        const auto mean = [&](harness::Algorithm a) {
            return aggs.at(a).at("associations").mean;
        };
        os << "K=" << n_ues << " EA " << mean(harness::Algorithm::EA) << "; ";
        if (mean(harness::Algorithm::BC) != n_ues) {
            detail = "BC association count is not exactly K";
            return false;
        }
        if (mean(harness::Algorithm::CS) != n_ues * 15.0) {
            detail = "CS association count is not exactly K*M";
            return false;
        }
        if (mean(harness::Algorithm::DA) < mean(harness::Algorithm::EA) ||
            mean(harness::Algorithm::MD) < mean(harness::Algorithm::EA)) {
            detail = "DA or MD ended below EA in connection count";
            return false;
        }
    }
    detail = os.str();
    return true;
}

bool whale_sanity(std::string& detail) {
    Rng rng(1011);
    baselines::WoaConfig config;
    config.epochs = 200;
    int good = 0;
    for (int trial = 0; trial < 50; ++trial) {
        auto s = random_scenario(3, 3, rng);
        s.ctx.radio.k_max = 2;
        s.ctx.radio.m_max = 2;
        social::UtilityOracle oracle(s.ctx);

        double best = 0.0;
        for (std::uint64_t code = 0; code < (1u << 9); ++code) {
            ClusteringMatrix c(3, 3);
            for (int b = 0; b < 9; ++b)
                if (code & (1u << b)) c.set(b / 3, b % 3, true);
            if (!c.feasible(2, 2)) continue;
            best = std::max(best,
                            baselines::woa_fitness(oracle.outcome(c), config.ee_target));
        }

        const auto result = baselines::woa(oracle, config, s.channels, 2, 2, rng);
        for (size_t i = 1; i < result.history.size(); ++i)
            if (result.history[i] < result.history[i - 1]) {
                detail = "best-so-far fitness decreased";
                return false;
            }
        if (result.best_fitness >= 0.95 * best) ++good;
    }
    std::ostringstream os;
    os << good << "/50 trials within 5% of the exhaustive optimum";
    detail = os.str();
    return good >= 45;
}

bool nmse_degradation(std::string& detail) {
    harness::SimulationConfig config;
    config.num_ues = 30;
    config.mc_deployments = 10;
    config.runs_per_deployment = 3;
    // Maximum-ratio precoding: zero-forcing inverts the estimated channel and
    // amplifies estimation error, so its efficiency loss at -20 dB is not a
    // plumbing property; MR isolates the graceful-degradation contract.
    config.radio.precoder = radio::Precoder::MR;

    auto run = [&](std::optional<double> nmse) {
        auto cfg = config;
        cfg.nmse_db = nmse;
        const auto agg =
            harness::monte_carlo(cfg, {harness::Algorithm::EA}, workers())
                .at(harness::Algorithm::EA);
        return std::pair<double, double>{agg.at("mean_qos").mean,
                                         agg.at("mean_cluster_ee").mean};
    };
    const auto perfect = run(std::nullopt);
    const auto db20 = run(-20.0);
    const auto db0 = run(0.0);
    std::ostringstream os;
    os << "QoS " << perfect.first << " / " << db20.first << " / " << db0.first
       << "; EE " << perfect.second << " / " << db20.second << " / " << db0.second
       << " (perfect / -20 dB / 0 dB)";
    detail = os.str();
    const bool close = std::abs(db20.first - perfect.first) <= 0.10 * perfect.first &&
                       std::abs(db20.second - perfect.second) <= 0.10 * perfect.second;
    const bool worse = db0.first < db20.first && db0.second < db20.second;
    return close && worse;
}

bool shutdown_accounting(std::string& detail) {
    int with_idle = 0, all_engaged = 0;
    for (int n_ues : {8, 30}) {
        harness::SimulationConfig config;
        config.num_ues = n_ues;
        for (int d = 0; d < 4; ++d) {
            const auto dep = harness::make_deployment(config, d);
            for (int r = 0; r < 3; ++r) {
                const auto result =
                    harness::run_once(config, harness::Algorithm::EA, dep, d, r);
                const auto& out = result.outcome;
                const int idle = config.num_aps - out.engaged_aps;
                const double expected =
                    out.total_power - 0.3 * 40.0 * static_cast<double>(idle);
                if (out.effective_power != expected) {
                    detail = "effective power deviates from the exact formula";
                    return false;
                }
                const auto m = result.metrics();
                if (idle > 0) {
                    ++with_idle;
                    if (m.at("effective_ee") < m.at("network_ee")) {
                        detail = "effective EE below network EE with idle APs";
                        return false;
                    }
                } else {
                    ++all_engaged;
                    if (m.at("effective_ee") != m.at("network_ee")) {
                        detail = "effective EE differs with all APs engaged";
                        return false;
                    }
                }
            }
        }
    }
    std::ostringstream os;
    os << with_idle << " runs with idle APs, " << all_engaged << " fully engaged";
    detail = os.str();
    return with_idle > 0;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<bool(std::string&)> check;
    };
    const std::vector<Criterion> criteria = {
        {1, "utility sums invariant to sociality factors", utility_sum_invariance},
        {2, "cluster power decomposition identity", power_decomposition},
        {3, "zero-forcing orthogonality", zf_orthogonality},
        {4, "per-AP transmit budget", transmit_budget},
        {5, "matching feasibility and symmetry", matching_feasibility},
        {6, "monotone improvement and termination", monotone_improvement},
        {7, "local optimality versus exhaustive check", local_optimality},
        {8, "egalitarian regime outperforms selfish", regime_ordering},
        {9, "EA reduces connections versus DA", association_reduction},
        {10, "benchmark association bounds", benchmark_bounds},
        {11, "whale search sanity", whale_sanity},
        {12, "graceful NMSE degradation", nmse_degradation},
        {13, "symbol-shutdown accounting", shutdown_accounting},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = criterion.check(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %2d %-48s %s  (%.1fs%s%s)\n", criterion.id,
                    criterion.name, ok ? "PASS" : "FAIL", seconds,
                    detail.empty() ? "" : "; ", detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
