//
// Copyright 2026 The edmc Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <benchmark/benchmark.h>

#include "edmc/harness.hpp"
#include "edmc/nearest_edm.hpp"

using namespace edmc;

namespace {

Matrix noisy_target(Index n, std::uint64_t seed) {
    const SyntheticInstance s = make_synthetic(n, 2, seed);
    Rng rng(seed + 1);
    Matrix g = -s.d_true.matrix();
    for (Index i = 0; i < n; ++i)
        for (Index j = i; j < n; ++j) {
            const double e = 0.1 * rng.normal();
            g(i, j) += e;
            if (i != j) g(j, i) += e;
        }
    return g;
}

void BM_EigenDecomposition(benchmark::State& state) {
    const Index n = state.range(0);
    const Matrix g = noisy_target(n, 1);
    Vector vals;
    Matrix vecs;
    for (auto _ : state) {
        detail::eigen_sym(g, vals, vecs);
        benchmark::DoNotOptimize(vals.data());
    }
}
BENCHMARK(BM_EigenDecomposition)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_ProjectAlmostPsd(benchmark::State& state) {
    const Index n = state.range(0);
    const Matrix g = noisy_target(n, 2);
    for (auto _ : state) benchmark::DoNotOptimize(detail::project_almost_psd(g).data());
}
BENCHMARK(BM_ProjectAlmostPsd)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_NearestEdm(benchmark::State& state) {
    const Index n = state.range(0);
    const Matrix g = noisy_target(n, 3);
    ProjectionOptions options;
    options.tolerance = 1e-8;
    int iterations = 0;
    for (auto _ : state) {
        const ProjectionResult r = project_hollow_edm_cone(g, options);
        iterations = r.inner_iterations;
        benchmark::DoNotOptimize(r.x.data());
    }
    state.counters["inner_iterations"] = iterations;
}
BENCHMARK(BM_NearestEdm)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_Solve(benchmark::State& state) {
    const Index n = state.range(0);
    const SyntheticInstance s = make_synthetic(n, 2, 4);
    const Index m = static_cast<Index>(0.3 * static_cast<double>(n * (n - 1) / 2));
    const ObservationSet obs =
        observe(sample_uniform(n, m, 5), s.d_true, 0.05, NoiseSpec{NoiseKind::gaussian, 6});
    CompletionSettings settings;
    settings.eta = 0.05;
    int iterations = 0;
    for (auto _ : state) {
        const CompletionResult r = complete(obs, settings);
        iterations = r.report.iterations;
        benchmark::DoNotOptimize(r.d_star.matrix().data());
    }
    state.counters["outer_iterations"] = iterations;
}
BENCHMARK(BM_Solve)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
