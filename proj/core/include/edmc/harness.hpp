//
// Copyright 2026 The edmc Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "edmc/graph.hpp"
#include "edmc/iapg.hpp"
#include "edmc/linalg.hpp"
#include "edmc/model.hpp"
#include "edmc/sampling.hpp"

namespace edmc {

/// Pipeline settings. Unset rho1 and eta are estimated from the data.
struct CompletionSettings {
    ModelParams params;
    std::optional<double> rho1;
    std::optional<double> eta;
    SolverOptions solver;
    /// Start the solver at -D_init; otherwise at 0.
    bool start_from_initializer = true;
};

struct CompletionResult {
    SymmetricMatrix initializer;
    SubspaceEstimate subspace;
    ModelParams params;  // with rho1 and eta resolved
    SolveReport report;
    SymmetricMatrix d_star;  // report.d_star with its diagonal zeroed
    EmbeddingResult embedding;
    std::vector<Index> original_index;  // row of d_star -> input vertex
};

/// Initializer: squared shortest paths over the observed distance graph.
SymmetricMatrix shortest_path_initializer(const ObservationSet& obs);

/// Observations -> initializer -> parameters -> solver -> embedding at params.rank.
CompletionResult complete(const ObservationSet& obs, const CompletionSettings& settings);
CompletionResult complete(const ObservationSet& obs, const SymmetricMatrix& initializer,
                          const CompletionSettings& settings);

/// Interaction counts: isolated actors removed, Jaccard distances observed.
CompletionResult complete_from_counts(const InteractionCounts& counts,
                                      const CompletionSettings& settings);

SymmetricMatrix with_zero_diagonal(const SymmetricMatrix& a);

struct SyntheticInstance {
    Matrix points;  // n x r, uniform in the unit cube
    SymmetricMatrix d_true;
};

SyntheticInstance make_synthetic(Index n, Index r, std::uint64_t seed);

/// Stream-splitting helper: a decorrelated seed for stream `stream` of `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// ||A - B||^2 / (n(n-1)/2).
double per_entry_error(const SymmetricMatrix& estimate, const SymmetricMatrix& truth);

/// Runs fn(0..count-1) on up to `threads` workers and rethrows the first error.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

struct BenchRecord {
    Index n = 0;
    Index r = 0;
    Index m = 0;
    double fraction = 0.0;
    double eta = 0.0;
    std::uint64_t seed = 0;
    double error = 0.0;      // ||D* - D||^2 / |Omega|
    double edm_score = 0.0;  // EDMscore(r) of D*
    int iterations = 0;
    double wall_seconds = 0.0;
    bool converged = false;
};

struct BenchBoundConfig {
    Index n = 80;
    Index r = 2;
    double eta = 0.05;
    NoiseKind noise = NoiseKind::gaussian;
    /// m / |Omega| per cell. Fractions below 1 sample uniformly with
    /// replacement; a fraction of 1 or more observes every pair exactly once.
    std::vector<double> fractions{0.1, 0.2, 0.4};
    int seeds = 20;
    std::uint64_t base_seed = 1;
    CompletionSettings settings;
    unsigned threads = 0;  // 0: hardware concurrency
};

struct BenchCellSummary {
    double fraction = 0.0;
    Index m = 0;
    double median_error = 0.0;
};

struct BenchBoundSummary {
    std::vector<BenchRecord> records;
    std::vector<BenchCellSummary> cells;
    double slope = 0.0;  // least-squares slope of log(median error) on log(m)
    bool strictly_decreasing = false;
};

BenchBoundSummary run_bench_bound(const BenchBoundConfig& config);

struct BenchAlphaConfig {
    Index n = 50;
    Index r = 2;
    std::vector<double> deltas{0.1, 0.3, 0.45, 0.5, 0.75};  // ||H|| / lambda_r
    int seeds = 100;
    std::uint64_t base_seed = 1;
    // Estimator comparison over rho2 in {0, 1, 2}.
    bool run_solves = true;
    double eta = 0.1;
    double fraction = 0.3;
    int solve_seeds = 20;
    CompletionSettings settings;
    unsigned threads = 0;
};

struct AlphaRow {
    double delta = 0.0;
    int trials = 0;
    int precondition_met = 0;
    int holds = 0;
    double mean_alpha0 = 0.0;
    double mean_alpha1 = 0.0;
    double mean_alpha2 = 0.0;
};

struct Rho2Row {
    double rho2 = 0.0;
    double median_error = 0.0;
    std::vector<double> errors;
};

struct BenchAlphaSummary {
    std::vector<AlphaRow> ordering;
    std::vector<Rho2Row> recovery;
};

/// Perturbs a synthetic EDM by a random symmetric hollow H with
/// ||H|| = delta * lambda_r and checks alpha(1) < min(alpha(0), alpha(2)).
AlphaOrdering perturbed_alpha_trial(Index n, Index r, double delta, std::uint64_t seed);

BenchAlphaSummary run_bench_alpha(const BenchAlphaConfig& config);

} // namespace edmc
