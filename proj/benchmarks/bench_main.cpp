#include <benchmark/benchmark.h>

#include "cfmimo/baselines.hpp"
#include "cfmimo/harness.hpp"
#include "cfmimo/matching.hpp"

namespace {

using namespace cfmimo;

harness::SimulationConfig small_config() {
    harness::SimulationConfig config;
    config.num_ues = 10;
    config.mc_deployments = 1;
    config.runs_per_deployment = 1;
    return config;
}

void BM_ChannelDraw(benchmark::State& state) {
    const auto config = small_config();
    const auto deployment = harness::make_deployment(config, 0);
    Rng rng(42);
    for (auto _ : state)
        benchmark::DoNotOptimize(channel::draw_fading(deployment.stats, rng));
}
BENCHMARK(BM_ChannelDraw);

void BM_OracleEvaluation(benchmark::State& state) {
    const auto config = small_config();
    const auto deployment = harness::make_deployment(config, 0);
    Rng rng(derive_seed(config.master_seed, 0, 0, 2000));
    const auto ch = channel::draw_fading(deployment.stats, rng);
    social::EvaluationContext ctx;
    ctx.channels = &ch;
    ctx.requests = harness::sample_requests(config, rng);
    ctx.radio = config.radio;
    ctx.power = config.power;
    ctx.sociality = config.sociality();
    const auto clustering = baselines::matched_decision(ch, config.radio.k_max,
                                                        config.radio.m_max);
    for (auto _ : state) benchmark::DoNotOptimize(social::evaluate(clustering, ctx));
}
BENCHMARK(BM_OracleEvaluation);

void BM_EarlyAcceptanceGame(benchmark::State& state) {
    const auto config = small_config();
    const auto deployment = harness::make_deployment(config, 0);
    Rng rng(derive_seed(config.master_seed, 0, 0, 2000));
    const auto ch = channel::draw_fading(deployment.stats, rng);
    social::EvaluationContext ctx;
    ctx.channels = &ch;
    ctx.requests = harness::sample_requests(config, rng);
    ctx.radio = config.radio;
    ctx.power = config.power;
    ctx.sociality = config.sociality();
    social::UtilityOracle oracle(ctx);
    const auto prefs = matching::build_preferences(ch);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            matching::run_ea(prefs, config.radio.k_max, config.radio.m_max, oracle));
}
BENCHMARK(BM_EarlyAcceptanceGame);

}  // namespace

BENCHMARK_MAIN();
