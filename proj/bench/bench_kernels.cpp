// Serial reference kernels against their OpenMP counterparts.
// Run with OMP_NUM_THREADS set to compare thread counts.

#include <benchmark/benchmark.h>

#include "kpcert/certify.hpp"
#include "kpcert/generate.hpp"
#include "kpcert/kernels.hpp"

namespace {

using namespace kpcert;

Instance bench_instance(std::size_t n) {
    GenConfig cfg;
    cfg.n_points = n;
    cfg.m_sets = 3;
    cfg.seed = 99;
    cfg.hub_bias = 0.5;
    return random_cyclic_instance(cfg);
}

DistanceMatrix raw_weights(std::size_t n) {
    Xoshiro256 rng(5);
    DistanceMatrix d(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) d(i, j) = d(j, i) = 1.0 - rng.uniform01();
    }
    return d;
}

template <kernels::SlackMin (*Kernel)(const kernels::SlackProblem&)>
void BM_MinSlack(benchmark::State& state) {
    const Instance inst = bench_instance(static_cast<std::size_t>(state.range(0)));
    const auto norms = inst.anchored().norms();
    const auto pairs = consecutive_pairs(*inst.rep);
    const auto grid = EpsilonGrid::uniform(kDefaultGridPoints);
    const PataParams params = kannan_to_pata(0.5);
    std::vector<double> first;
    std::vector<double> correction;
    for (double eps : grid.values()) {
        const auto w = kannan_pata_weights(eps, params);
        first.push_back(w.kannan);
        correction.push_back(w.correction);
    }
    const kernels::SlackProblem problem{{inst.space.size(), inst.space.matrix().data(), inst.map.image(), norms},
                                        pairs, first, correction, params.beta, kernels::RhsForm::kannan_pata};
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(problem));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * problem.check_count()));
}

template <kernels::KannanScan (*Kernel)(const kernels::PointTable&, std::span<const ConsecutivePair>)>
void BM_KannanScan(benchmark::State& state) {
    const Instance inst = bench_instance(static_cast<std::size_t>(state.range(0)));
    const auto pairs = consecutive_pairs(CyclicRepresentation::whole(inst.space.size()));
    const kernels::PointTable t{inst.space.size(), inst.space.matrix().data(), inst.map.image(), {}};
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(t, pairs));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * pairs.size()));
}

template <std::vector<Violation> (*Kernel)(const DistanceMatrix&, double)>
void BM_Triangle(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const DistanceMatrix d = raw_weights(n);
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(d, 0.0));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n * n * n));
}

template <bool (*Kernel)(DistanceMatrix&)>
void BM_ShortestPathSweep(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const DistanceMatrix d = raw_weights(n);
    for (auto _ : state) {
        DistanceMatrix work = d;
        benchmark::DoNotOptimize(Kernel(work));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n * n * n));
}

BENCHMARK(BM_MinSlack<kernels::reference::min_slack>)->Name("min_slack/reference")->Arg(16)->Arg(64)->Arg(128);
BENCHMARK(BM_MinSlack<kernels::parallel::min_slack>)->Name("min_slack/parallel")->Arg(16)->Arg(64)->Arg(128);
BENCHMARK(BM_KannanScan<kernels::reference::kannan_scan>)->Name("kannan_scan/reference")->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_KannanScan<kernels::parallel::kannan_scan>)->Name("kannan_scan/parallel")->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_Triangle<kernels::reference::triangle_violations>)->Name("triangle/reference")->Arg(32)->Arg(128)->Arg(256);
BENCHMARK(BM_Triangle<kernels::parallel::triangle_violations>)->Name("triangle/parallel")->Arg(32)->Arg(128)->Arg(256);
BENCHMARK(BM_ShortestPathSweep<kernels::reference::relax_shortest_paths>)
    ->Name("shortest_path_sweep/reference")->Arg(32)->Arg(128)->Arg(256);
BENCHMARK(BM_ShortestPathSweep<kernels::parallel::relax_shortest_paths>)
    ->Name("shortest_path_sweep/parallel")->Arg(32)->Arg(128)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
