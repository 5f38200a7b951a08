#include <benchmark/benchmark.h>

#include "qrc/classes.h"
#include "qrc/complexity.h"
#include "qrc/gates.h"
#include "qrc/robustness.h"

using namespace qrc;

static void BM_clifford_class(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(clifford_class(n).size());
    }
}
BENCHMARK(BM_clifford_class)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

static void BM_rademacher_exact(benchmark::State &state) {
    const auto m = static_cast<Eigen::Index>(state.range(0));
    Rng rng = make_rng(1, 0);
    VectorSet set;
    for (int i = 0; i < 64; ++i) {
        rvector v(m);
        for (Eigen::Index j = 0; j < m; ++j) {
            v[j] = uniform01(rng);
        }
        set.push_back(v);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(rademacher_set_exact(set));
    }
}
BENCHMARK(BM_rademacher_exact)->DenseRange(8, 16, 4)->Unit(benchmark::kMillisecond);

static void BM_class_vectors(benchmark::State &state) {
    CircuitClass c = clifford_class(2);
    SampleDistribution u = SampleDistribution::uniform(2);
    Rng rng = make_rng(2, 0);
    SampleSet s = u.draw(static_cast<size_t>(state.range(0)), rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(class_vectors(c, s).size());
    }
}
BENCHMARK(BM_class_vectors)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_free_robustness(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    CircuitClass c = clifford_class(n);
    QuantumChannel t = gates::word_channel(n == 1 ? "T" : "T0", n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(free_robustness(t, c).lambda_star);
    }
}
BENCHMARK(BM_free_robustness)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_augment(benchmark::State &state) {
    CircuitClass c = clifford_class(1);
    QuantumChannel t = gates::word_channel("T", 1);
    const int k = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(augment(c, t, k, 3).size());
    }
}
BENCHMARK(BM_augment)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
