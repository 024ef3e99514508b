//
// Copyright 2026 The edmc Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "edmc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "edmc/errors.hpp"

namespace edmc {

namespace {

double median_of(std::vector<double> v) {
    if (v.empty()) return std::nan("");
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

std::vector<IndexPair> all_pairs(Index n) {
    std::vector<IndexPair> pairs;
    pairs.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j) pairs.push_back({i, j});
    return pairs;
}

unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

ModelParams resolve_params(const ObservationSet& obs, const SymmetricMatrix& initializer,
                           const CompletionSettings& settings) {
    ModelParams params = settings.params;
    params.eta = settings.eta ? *settings.eta
                              : estimate_noise_scale(obs, initializer, settings.params.rank);
    params.rho1 = settings.rho1 ? *settings.rho1
                                : estimate_rho1(obs, params.kappa, params.c_rho, params.eta);
    params.validate();
    return params;
}

} // namespace

SymmetricMatrix with_zero_diagonal(const SymmetricMatrix& a) {
    Matrix m = a.matrix();
    m.diagonal().setZero();
    return SymmetricMatrix(std::move(m));
}

SymmetricMatrix shortest_path_initializer(const ObservationSet& obs) {
    return shortest_path_complete(graph_from_observations(obs));
}

CompletionResult complete(const ObservationSet& obs, const SymmetricMatrix& initializer,
                          const CompletionSettings& settings) {
    if (initializer.size() != obs.n()) {
        throw InvalidArgument("initializer order does not match the observations");
    }
    const ModelParams params = resolve_params(obs, initializer, settings);
    if (params.rank >= obs.n()) throw InvalidArgument("rank must be smaller than n");

    SubspaceEstimate subspace = initial_subspace(initializer, params.rank);
    const QuadraticProblem problem = build_problem(obs, subspace.basis, params);
    const SymmetricMatrix x0 = settings.start_from_initializer
                                   ? SymmetricMatrix::symmetrize(-initializer.matrix())
                                   : SymmetricMatrix::zero(obs.n());
    SolveReport report = solve(problem, x0, params, settings.solver);
    SymmetricMatrix d_star = with_zero_diagonal(report.d_star);
    EmbeddingResult embedding = cmds_embed(d_star, params.rank);

    std::vector<Index> identity(static_cast<std::size_t>(obs.n()));
    std::iota(identity.begin(), identity.end(), Index{0});
    return CompletionResult{initializer,       std::move(subspace), params,
                            std::move(report), std::move(d_star),   std::move(embedding),
                            std::move(identity)};
}

CompletionResult complete(const ObservationSet& obs, const CompletionSettings& settings) {
    return complete(obs, shortest_path_initializer(obs), settings);
}

CompletionResult complete_from_counts(const InteractionCounts& counts,
                                      const CompletionSettings& settings) {
    auto compact = strip_isolated(counts);
    const PartialDistanceGraph graph = jaccard_dissimilarity(compact.graph);
    const SymmetricMatrix initializer = shortest_path_complete(graph);
    const ObservationSet obs = observations_from_graph(graph, settings.eta.value_or(0.0));
    CompletionResult result = complete(obs, initializer, settings);
    result.original_index = std::move(compact.original_index);
    return result;
}

SyntheticInstance make_synthetic(Index n, Index r, std::uint64_t seed) {
    if (n < 2 || r < 1) throw InvalidArgument("synthetic instance needs n >= 2 and r >= 1");
    Rng rng(seed);
    Matrix points(n, r);
    for (Index i = 0; i < n; ++i)
        for (Index c = 0; c < r; ++c) points(i, c) = rng.uniform();
    SymmetricMatrix d = squared_distances(points);
    return {std::move(points), std::move(d)};
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 finalizer over a combined state.
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double per_entry_error(const SymmetricMatrix& estimate, const SymmetricMatrix& truth) {
    if (estimate.size() != truth.size()) throw InvalidArgument("matrix orders differ");
    const auto n = static_cast<double>(truth.size());
    return (estimate.matrix() - truth.matrix()).squaredNorm() / (n * (n - 1.0) / 2.0);
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn) {
    const unsigned workers = std::min<unsigned>(resolve_threads(threads),
                                                static_cast<unsigned>(std::max<std::size_t>(count, 1)));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        run();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
    }
    if (failure) std::rethrow_exception(failure);
}

BenchBoundSummary run_bench_bound(const BenchBoundConfig& config) {
    if (config.fractions.empty() || config.seeds < 1) {
        throw InvalidArgument("bench-bound needs at least one fraction and one seed");
    }
    const Index omega = config.n * (config.n - 1) / 2;
    BenchBoundSummary summary;
    const std::size_t cells = config.fractions.size() * static_cast<std::size_t>(config.seeds);
    summary.records.resize(cells);

    parallel_for(cells, config.threads, [&](std::size_t cell) {
        const std::size_t f = cell / static_cast<std::size_t>(config.seeds);
        const auto s = static_cast<std::uint64_t>(cell % static_cast<std::size_t>(config.seeds));
        const double fraction = config.fractions[f];
        const std::uint64_t seed = config.base_seed + s;
        const Index m = fraction >= 1.0
                            ? omega
                            : std::max<Index>(1, std::llround(fraction * static_cast<double>(omega)));

        const SyntheticInstance inst = make_synthetic(config.n, config.r, derive_seed(seed, 0));
        const auto pairs = fraction >= 1.0 ? all_pairs(config.n)
                                           : sample_uniform(config.n, m, derive_seed(seed, 1 + f));
        const ObservationSet obs = observe(pairs, inst.d_true, config.eta,
                                           {config.noise, derive_seed(seed, 1000 + f)});
        CompletionSettings settings = config.settings;
        settings.params.rank = config.r;
        if (!settings.eta) settings.eta = config.eta;
        const CompletionResult result = complete(obs, settings);

        BenchRecord& rec = summary.records[cell];
        rec.n = config.n;
        rec.r = config.r;
        rec.m = m;
        rec.fraction = fraction;
        rec.eta = config.eta;
        rec.seed = seed;
        rec.error = per_entry_error(result.d_star, inst.d_true);
        rec.edm_score = result.embedding.edm_scores.empty()
                            ? 0.0
                            : result.embedding.edm_scores[static_cast<std::size_t>(config.r - 1)];
        rec.iterations = result.report.iterations;
        rec.wall_seconds = result.report.wall_seconds;
        rec.converged = result.report.converged;
    });

    for (std::size_t f = 0; f < config.fractions.size(); ++f) {
        std::vector<double> errors;
        Index m = 0;
        for (const auto& rec : summary.records) {
            if (rec.fraction == config.fractions[f]) {
                errors.push_back(rec.error);
                m = rec.m;
            }
        }
        summary.cells.push_back({config.fractions[f], m, median_of(std::move(errors))});
    }

    summary.strictly_decreasing = true;
    for (std::size_t c = 1; c < summary.cells.size(); ++c) {
        if (!(summary.cells[c].median_error < summary.cells[c - 1].median_error)) {
            summary.strictly_decreasing = false;
        }
    }
    if (summary.cells.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const auto k = static_cast<double>(summary.cells.size());
        for (const auto& c : summary.cells) {
            const double x = std::log(static_cast<double>(c.m));
            const double y = std::log(c.median_error);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        summary.slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    }
    return summary;
}

AlphaOrdering perturbed_alpha_trial(Index n, Index r, double delta, std::uint64_t seed) {
    const SyntheticInstance inst = make_synthetic(n, r, derive_seed(seed, 0));
    const Spectrum truth = spectral_decomposition(
        SymmetricMatrix::symmetrize(-detail::double_center(inst.d_true.matrix())));
    const double lambda_r = truth.eigenvalues(r - 1);

    Rng rng(derive_seed(seed, 1));
    Matrix h = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) {
            h(i, j) = h(j, i) = rng.normal();
        }
    }
    h *= delta * lambda_r / h.norm();
    const SymmetricMatrix d_init(inst.d_true.matrix() + h);
    return verify_alpha_ordering(inst.d_true, d_init, r);
}

BenchAlphaSummary run_bench_alpha(const BenchAlphaConfig& config) {
    BenchAlphaSummary summary;
    for (std::size_t di = 0; di < config.deltas.size(); ++di) {
        const double delta = config.deltas[di];
        std::vector<AlphaOrdering> trials(static_cast<std::size_t>(config.seeds));
        parallel_for(trials.size(), config.threads, [&](std::size_t s) {
            trials[s] = perturbed_alpha_trial(config.n, config.r, delta,
                                              derive_seed(config.base_seed + s, 7 + di));
        });
        AlphaRow row;
        row.delta = delta;
        row.trials = config.seeds;
        for (const auto& t : trials) {
            if (!t.precondition_met) continue;
            ++row.precondition_met;
            row.holds += t.holds ? 1 : 0;
            row.mean_alpha0 += t.alpha0;
            row.mean_alpha1 += t.alpha1;
            row.mean_alpha2 += t.alpha2;
        }
        if (row.precondition_met > 0) {
            row.mean_alpha0 /= row.precondition_met;
            row.mean_alpha1 /= row.precondition_met;
            row.mean_alpha2 /= row.precondition_met;
        }
        summary.ordering.push_back(row);
    }

    if (!config.run_solves) return summary;
    const std::vector<double> presets{kRho2NuclearNorm, kRho2Default, kRho2MinimumVolume};
    const Index omega = config.n * (config.n - 1) / 2;
    const Index m = std::max<Index>(1, std::llround(config.fraction * static_cast<double>(omega)));
    std::vector<std::vector<double>> errors(presets.size(),
                                            std::vector<double>(static_cast<std::size_t>(config.solve_seeds)));
    parallel_for(static_cast<std::size_t>(config.solve_seeds), config.threads, [&](std::size_t s) {
        const std::uint64_t seed = config.base_seed + s;
        const SyntheticInstance inst = make_synthetic(config.n, config.r, derive_seed(seed, 0));
        const auto pairs = sample_uniform(config.n, m, derive_seed(seed, 1));
        const ObservationSet obs =
            observe(pairs, inst.d_true, config.eta, {NoiseKind::gaussian, derive_seed(seed, 2)});
        const SymmetricMatrix init = shortest_path_initializer(obs);
        for (std::size_t p = 0; p < presets.size(); ++p) {
            CompletionSettings settings = config.settings;
            settings.params.rank = config.r;
            settings.params.rho2 = presets[p];
            if (!settings.eta) settings.eta = config.eta;
            const CompletionResult result = complete(obs, init, settings);
            errors[p][s] = per_entry_error(result.d_star, inst.d_true);
        }
    });
    for (std::size_t p = 0; p < presets.size(); ++p) {
        summary.recovery.push_back({presets[p], median_of(errors[p]), errors[p]});
    }
    return summary;
}

} // namespace edmc
