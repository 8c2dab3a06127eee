#include <benchmark/benchmark.h>

#include "distvrft/evaluation.hpp"
#include "distvrft/ideal_controller.hpp"
#include "distvrft/monte_carlo.hpp"
#include "distvrft/standard_networks.hpp"
#include "generators.hpp"

using namespace distvrft;

static void BM_Filter(benchmark::State& state) {
    gen::Rng rng(1);
    const auto a = gen::stable_tf(rng, 4, 1);
    const auto x = gen::white(rng, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(filter(a, x));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Filter)->Arg(100)->Arg(10000);

static void BM_SimulatePlantNineNode(benchmark::State& state) {
    gen::Rng rng(2);
    const auto spec = nine_node_network();
    const auto u = gen::white_channels(rng, 9, 100);
    for (auto _ : state) benchmark::DoNotOptimize(simulate_plant(spec, u));
}
BENCHMARK(BM_SimulatePlantNineNode);

static void BM_PerformanceMetric(benchmark::State& state) {
    const auto spec = nine_node_network();
    const auto data = generate_data(spec, 100, 1.0, 0.1, 3);
    const auto syn = synthesize_controllers(spec, data.u, data.y, {ControllerClass::full()}, 1);
    const auto grid = frequency_grid(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(performance_metric(spec, syn[0].controller, grid));
}
BENCHMARK(BM_PerformanceMetric)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond);

static void BM_IdentificationReplicate(benchmark::State& state) {
    const auto spec = nine_node_network();
    const auto classes = default_classes(spec.graph);
    std::uint64_t seed = 1;
    for (auto _ : state) {
        const auto data = generate_data(spec, 100, 1.0, 0.1, seed++);
        benchmark::DoNotOptimize(synthesize_controllers(spec, data.u, data.y, classes, 1));
    }
}
BENCHMARK(BM_IdentificationReplicate)->Unit(benchmark::kMillisecond);

static void BM_MonteCarloReplicate(benchmark::State& state) {
    const auto spec = nine_node_network();
    ExperimentConfig cfg;
    cfg.runs = 1;
    cfg.threads = 1;
    cfg.classes = default_classes(spec.graph);
    for (auto _ : state) {
        benchmark::DoNotOptimize(monte_carlo(spec, cfg));
        ++cfg.seed;
    }
}
BENCHMARK(BM_MonteCarloReplicate)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
