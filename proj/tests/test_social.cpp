#include <doctest.h>

#include <cmath>

#include "cfmimo/social.hpp"
#include "helpers.hpp"

using namespace cfmimo;
using namespace cfmimo::social;
using doctest::Approx;

TEST_CASE("QoS satisfaction") {
    CHECK(qos_satisfaction(3e8, 3e8) == Approx(1.0));
    CHECK(qos_satisfaction(0.0, 3e8) == 0.0);
    CHECK(qos_satisfaction(6e8, 3e8) == Approx(1.0));
    CHECK(qos_satisfaction(1.5e8, 3e8) == Approx(0.5));
    CHECK_THROWS_AS(qos_satisfaction(1e8, 0.0), std::invalid_argument);
}

TEST_CASE("social mixes") {
    const std::vector<double> rho = {0.2, 0.8, 0.5};
    SUBCASE("selfish limit") {
        for (int k = 0; k < 3; ++k) CHECK(ue_utility(k, rho, 1.0) == Approx(rho[k]));
    }
    SUBCASE("altruistic two-UE crossover") {
        const std::vector<double> pair = {0.3, 0.9};
        CHECK(ue_utility(0, pair, 0.0) == Approx(0.9));
        CHECK(ue_utility(1, pair, 0.0) == Approx(0.3));
        CHECK(cluster_utility(0, pair, 0.0) == Approx(0.9));
    }
    SUBCASE("uniform vector is a fixed point") {
        const std::vector<double> flat = {0.5, 0.5, 0.5, 0.5};
        for (double alpha : {0.0, 0.25, 1.0})
            CHECK(ue_utility(2, flat, alpha) == Approx(0.5));
    }
    SUBCASE("affine in the sociality factor") {
        const double u0 = ue_utility(0, rho, 0.0);
        const double u5 = ue_utility(0, rho, 0.5);
        const double u1 = ue_utility(0, rho, 1.0);
        CHECK(u5 == Approx(0.5 * (u0 + u1)).epsilon(1e-12));
        const double c0 = cluster_utility(1, rho, 0.0);
        const double c3 = cluster_utility(1, rho, 0.3);
        const double c1 = cluster_utility(1, rho, 1.0);
        CHECK(c3 == Approx(0.7 * c0 + 0.3 * c1).epsilon(1e-12));
    }
    SUBCASE("single-UE degenerate case") {
        const std::vector<double> one = {0.4};
        CHECK(ue_utility(0, one, 1.0) == Approx(0.4));
        CHECK_THROWS_AS(ue_utility(0, one, 0.5), std::invalid_argument);
    }
}

TEST_CASE("utility sums are invariant to the sociality factors") {
    Rng rng(41);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::uniform_real_distribution<double> ee_dist(1e5, 1e8);
    const int K = 10;
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> rho(K), ee(K);
        for (double& r : rho) r = uni(rng);
        for (double& e : ee) e = ee_dist(rng);
        for (double f : {0.0, 1.0 / K, 0.37, 1.0}) {
            double gamma_sum = 0.0, util_sum = 0.0;
            for (int k = 0; k < K; ++k) {
                gamma_sum += ue_utility(k, rho, f);
                util_sum += cluster_utility(k, ee, f);
            }
            CHECK(std::abs(gamma_sum - total_qos(rho)) < 1e-12);
            CHECK(std::abs(util_sum - total_cluster_ee(ee)) <
                  1e-9 * total_cluster_ee(ee));
        }
    }
    CHECK(total_qos(std::vector<double>(5, 0.0)) == 0.0);
    CHECK(total_cluster_ee(std::vector<double>(5, 0.0)) == 0.0);
}

TEST_CASE("end-to-end utility vector") {
    SUBCASE("all-zero clustering yields all-zero utilities") {
        Rng rng(43);
        auto s = test::random_scenario(3, 2, rng);
        const auto u = utility_vector(ClusteringMatrix(3, 2), s.ctx);
        for (double g : u.gamma) CHECK(g == 0.0);
        for (double e : u.cluster_util) CHECK(e == 0.0);
    }
    SUBCASE("orthogonal two-link closed form") {
        channel::ChannelRealization ch;
        ch.K = 2;
        ch.M = 2;
        ch.N = 2;
        ch.true_channels.assign(4, channel::CVector::Zero(2));
        ch.true_channels[0](0) = 2e-4;  // UE0 on AP0
        ch.true_channels[3](1) = 3e-4;  // UE1 on AP1
        ch.csi_channels = ch.true_channels;
        ch.pathloss.assign(4, 1.0);
        ch.rician_factors.assign(4, 0.0);

        EvaluationContext ctx;
        ctx.channels = &ch;
        ctx.requests = {3e8, 3e8};
        ctx.sociality = SocialityConfig::selfish();

        ClusteringMatrix c(2, 2);
        c.set(0, 0, true);
        c.set(1, 1, true);
        const auto out = evaluate(c, ctx);
        const double noise = radio::noise_power(ctx.radio.bandwidth);
        for (int k = 0; k < 2; ++k) {
            const double h2 = ch.h(k, k).squaredNorm();
            const double expected = std::min(
                1.0, ctx.radio.bandwidth * std::log2(1.0 + 0.25 * h2 / noise) / 3e8);
            CHECK(out.rho[k] == Approx(expected).epsilon(1e-12));
        }
    }
    SUBCASE("evaluation is deterministic") {
        Rng rng(47);
        auto s = test::random_scenario(4, 3, rng);
        ClusteringMatrix c(4, 3);
        c.set(0, 0, true);
        c.set(1, 1, true);
        c.set(2, 2, true);
        c.set(3, 0, true);
        const auto a = utility_vector(c, s.ctx);
        const auto b = utility_vector(c, s.ctx);
        CHECK(a.gamma == b.gamma);
        CHECK(a.cluster_util == b.cluster_util);
    }
}

TEST_CASE("Pareto dominance") {
    UtilityVector a{{0.5, 0.5}, {1.0, 1.0}};
    UtilityVector b = a;
    CHECK_FALSE(dominates(a, b));
    CHECK_FALSE(dominates(b, a));
    b.gamma[0] = 0.4;
    CHECK(dominates(a, b));
    CHECK_FALSE(dominates(b, a));
    b.cluster_util[1] = 2.0;
    CHECK_FALSE(dominates(a, b));
    CHECK_FALSE(dominates(b, a));
}

TEST_CASE("brute-force Pareto front") {
    Rng rng(53);
    SUBCASE("single pair instance") {
        auto s = test::random_scenario(1, 1, rng);
        const auto front = pareto_front_bruteforce(s.ctx, 1, 1);
        REQUIRE(front.size() >= 1);
        bool has_link = false;
        for (const auto& c : front)
            if (c.get(0, 0)) has_link = true;
        CHECK(has_link);
    }
    SUBCASE("front is mutually non-dominated") {
        auto s = test::random_scenario(2, 3, rng);
        const auto front = pareto_front_bruteforce(s.ctx, 2, 2);
        REQUIRE(!front.empty());
        std::vector<UtilityVector> utils;
        for (const auto& c : front) utils.push_back(utility_vector(c, s.ctx));
        for (size_t i = 0; i < utils.size(); ++i)
            for (size_t j = 0; j < utils.size(); ++j)
                if (i != j) CHECK_FALSE(dominates(utils[i], utils[j]));
    }
    SUBCASE("tight quotas enumerate without error") {
        auto s = test::random_scenario(2, 2, rng);
        const auto front = pareto_front_bruteforce(s.ctx, 1, 1);
        CHECK(!front.empty());
        for (const auto& c : front) CHECK(c.feasible(1, 1));
    }
    SUBCASE("oversized instance refused") {
        auto s = test::random_scenario(4, 4, rng);
        CHECK_THROWS_AS(pareto_front_bruteforce(s.ctx, 2, 2), std::invalid_argument);
    }
}

TEST_CASE("oracle counts evaluations") {
    Rng rng(59);
    auto s = test::random_scenario(2, 2, rng);
    UtilityOracle oracle(s.ctx);
    CHECK(oracle.calls() == 0);
    ClusteringMatrix c(2, 2);
    c.set(0, 0, true);
    (void)oracle(c);
    (void)oracle.outcome(c);
    CHECK(oracle.calls() == 2);
}
