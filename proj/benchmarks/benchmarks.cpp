#include <benchmark/benchmark.h>

#include <random>

#include "qclink/analysis.hpp"
#include "qclink/scenario.hpp"
#include "qclink/sim.hpp"

using namespace qclink;

namespace {

PolUnitary random_fiber(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
    return unitary_from_waveplates({0.0, M_PI / 4, 0.0, M_PI / 4},
                                   {ang(rng), ang(rng), ang(rng), ang(rng)});
}

void bm_waveplate_cascade(benchmark::State& state) {
    std::mt19937_64 rng(1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(random_fiber(rng));
    }
}
BENCHMARK(bm_waveplate_cascade);

void bm_controller_step(benchmark::State& state) {
    std::mt19937_64 rng(2);
    const PolUnitary fiber = random_fiber(rng);
    ApcState apc;
    for (auto _ : state) {
        apc = controller_step(apc, fiber);
        benchmark::DoNotOptimize(apc);
    }
}
BENCHMARK(bm_controller_step);

void bm_controller_converge(benchmark::State& state) {
    std::mt19937_64 rng(3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(converge(ApcState{}, random_fiber(rng)));
    }
}
BENCHMARK(bm_controller_converge);

void bm_background_rate(benchmark::State& state) {
    const Scenario s = default_paper_scenario();
    const NoiseScenario ns = s.noise_scenario();
    double z = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            total_background_rate(Direction::node2_to_node1, z, ns, s.raman));
        z = z < 200.0 ? z + 0.1 : 1.0;
    }
}
BENCHMARK(bm_background_rate);

void bm_distance_solve(benchmark::State& state) {
    const Scenario s = default_paper_scenario();
    for (auto _ : state) {
        benchmark::DoNotOptimize(max_distance(s, Direction::node2_to_node1));
    }
}
BENCHMARK(bm_distance_solve);

void bm_distance_sweep_grid(benchmark::State& state) {
    const Scenario s = default_paper_scenario();
    std::vector<double> grid;
    for (double z = 1.0; z <= 100.0; z += 1.0) grid.push_back(z);
    for (auto _ : state) {
        benchmark::DoNotOptimize(visibility_vs_distance(s, grid));
    }
}
BENCHMARK(bm_distance_sweep_grid);

void bm_stabilization_minute(benchmark::State& state) {
    const Scenario s = default_paper_scenario();
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_stabilization(s, 60.0, true, 7));
    }
}
BENCHMARK(bm_stabilization_minute);

}  // namespace

BENCHMARK_MAIN();
