//
// Copyright 2026 The edmc Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <doctest.h>

#include "edmc/harness.hpp"
#include "edmc/iapg.hpp"
#include "test_support.hpp"

using namespace edmc;

namespace {

std::vector<IndexPair> all_pairs(Index n) {
    std::vector<IndexPair> out;
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j) out.push_back({i, j});
    return out;
}

} // namespace

TEST_CASE("momentum sequence") {
    CHECK(momentum_next(1.0) == doctest::Approx((1 + std::sqrt(5.0)) / 2).epsilon(1e-15));
    CHECK(momentum_next(1.0) == doctest::Approx(1.6180340).epsilon(1e-7));
    CHECK(momentum_next(momentum_next(1.0)) == doctest::Approx(2.1935271).epsilon(1e-7));
    double t = 1.0;
    for (int k = 1; k <= 100000; ++k) {
        CHECK_UNARY(t >= (k + 1) / 2.0);
        t = momentum_next(t);
    }
}

TEST_CASE("extrapolate") {
    Rng rng(1);
    const Matrix a = testing::random_symmetric(4, rng);
    CHECK(extrapolate(a, a, 3.0, 4.0) == a);
    const Matrix b = testing::random_symmetric(4, rng);
    CHECK(extrapolate(a, b, 1.0, momentum_next(1.0)) == a);
    CHECK((extrapolate(a, Matrix::Zero(4, 4), 2.0, 2.5) - 1.4 * a).norm() < 1e-14);
}

TEST_CASE("inner tolerance schedule") {
    SolverOptions o;
    CHECK(inner_tolerance(1, 1e-3, o) == doctest::Approx(1e-4));
    CHECK(inner_tolerance(10, 1e-3, o) == doctest::Approx(1e-4 / std::pow(10.0, 1.2)));
    CHECK(inner_tolerance(1000000000, 1e-3, o) == o.inner_floor);
    o.exact_inner = true;
    CHECK(inner_tolerance(1, 1e-3, o) == o.inner_floor);
}

TEST_CASE("residuals") {
    const QuadraticProblem prob(3, {{0, 1}}, Vector::Zero(1), Matrix::Zero(3, 3));
    Matrix x = Matrix::Zero(3, 3);
    x(0, 0) = 0.1;
    const Residuals r = residuals(prob, x, x, Vector::Zero(3));
    CHECK(r.primal == doctest::Approx(0.1));

    // Fully observed noiseless problem: X = -D is optimal with zero gradient,
    // so G = X and y = 0 make both residuals vanish.
    const SyntheticInstance s = make_synthetic(6, 2, 3);
    const auto pairs = all_pairs(6);
    const ObservationSet obs = observe(pairs, s.d_true, 0.0, NoiseSpec{});
    const QuadraticProblem full = build_problem(obs, Matrix::Identity(6, 2), ModelParams{});
    const Matrix opt = -s.d_true.matrix();
    const Residuals at_opt = residuals(full, opt, opt, Vector::Zero(6));
    CHECK(at_opt.primal < 1e-9);
    CHECK(at_opt.dual < 1e-9);
}

TEST_CASE("full observation recovers the truth") {
    const SyntheticInstance s = make_synthetic(20, 2, 5);
    const auto pairs = all_pairs(20);
    const ObservationSet obs = observe(pairs, s.d_true, 0.0, NoiseSpec{});
    ModelParams params;
    params.tol = 1e-9;
    const QuadraticProblem prob = build_problem(obs, Matrix::Identity(20, 2), params);
    const SolveReport rep = solve(prob, SymmetricMatrix::zero(20), params);
    CHECK(rep.converged);
    CHECK((rep.d_star.matrix() - s.d_true.matrix()).norm() <= 1e-6);
    CHECK(rep.objective.size() == static_cast<std::size_t>(rep.iterations));
}

TEST_CASE("solve on a noisy partial instance") {
    const SyntheticInstance s = make_synthetic(30, 2, 6);
    const auto pairs = sample_uniform(30, 200, 7);
    const ObservationSet obs = observe(pairs, s.d_true, 0.05, NoiseSpec{NoiseKind::gaussian, 8});
    CompletionSettings settings;
    settings.eta = 0.05;
    const CompletionResult res = complete(obs, settings);
    const SolveReport& rep = res.report;
    CHECK(rep.converged);
    CHECK(std::max(rep.residuals.primal, rep.residuals.dual) <= settings.params.tol);
    CHECK(rep.d_star.matrix().minCoeff() >= -settings.params.tol);
    CHECK(rep.d_star.matrix().diagonal().norm() <= settings.params.tol);

    // Permuting the observations leaves the answer unchanged up to rounding.
    std::vector<std::size_t> order(pairs.size());
    std::iota(order.begin(), order.end(), 0);
    std::reverse(order.begin(), order.end());
    std::vector<IndexPair> p2;
    Vector v2(obs.m());
    for (std::size_t k = 0; k < order.size(); ++k) {
        p2.push_back(pairs[order[k]]);
        v2(static_cast<Index>(k)) = obs.values()(static_cast<Index>(order[k]));
    }
    const ObservationSet permuted(30, p2, v2, 0.05);
    const CompletionResult res2 = complete(permuted, settings);
    CHECK((res2.d_star.matrix() - res.d_star.matrix()).norm() <=
          1e-6 * (1 + res.d_star.matrix().norm()));
}

TEST_CASE("exact inner solves keep the objective under control") {
    const SyntheticInstance s = make_synthetic(12, 2, 9);
    const auto pairs = sample_uniform(12, 40, 10);
    const ObservationSet obs = observe(pairs, s.d_true, 0.05, NoiseSpec{NoiseKind::gaussian, 11});
    ModelParams params;
    params.rho1 = 0.01;
    params.tol = 1e-7;
    params.max_iter = 300;
    const QuadraticProblem prob =
        build_problem(obs, initial_subspace(s.d_true, 2).basis, params);
    SolverOptions options;
    options.exact_inner = true;
    const SolveReport rep = solve(prob, SymmetricMatrix::zero(12), params, options);
    double best = rep.objective.front();
    std::vector<double> best_so_far;
    for (double f : rep.objective) {
        CHECK(std::isfinite(f));
        CHECK(f <= rep.objective.front() + 1e-9 * std::abs(rep.objective.front()));
        best = std::min(best, f);
        best_so_far.push_back(best);
    }
    for (std::size_t k = 1; k < best_so_far.size(); ++k)
        CHECK(best_so_far[k] <= best_so_far[k - 1] + 1e-12);
    CHECK(rep.objective.back() <= best + 1e-6 * (1 + std::abs(best)));
}

TEST_CASE("adaptive restart converges to the same point") {
    const SyntheticInstance s = make_synthetic(25, 2, 12);
    const auto pairs = sample_uniform(25, 150, 13);
    const ObservationSet obs = observe(pairs, s.d_true, 0.02, NoiseSpec{NoiseKind::gaussian, 14});
    CompletionSettings plain;
    plain.eta = 0.02;
    plain.params.tol = 1e-6;
    CompletionSettings restart = plain;
    restart.solver.adaptive_restart = true;
    const CompletionResult a = complete(obs, plain);
    const CompletionResult b = complete(obs, restart);
    CHECK(a.report.converged);
    CHECK(b.report.converged);
    CHECK((a.d_star.matrix() - b.d_star.matrix()).norm() <= 1e-3 * (1 + a.d_star.matrix().norm()));
}

TEST_CASE("iteration log") {
    const SyntheticInstance s = make_synthetic(10, 2, 15);
    const ObservationSet obs = observe(all_pairs(10), s.d_true, 0.0, NoiseSpec{});
    ModelParams params;
    const QuadraticProblem prob = build_problem(obs, Matrix::Identity(10, 2), params);
    std::ostringstream log;
    SolverOptions options;
    options.log = &log;
    const SolveReport rep = solve(prob, SymmetricMatrix::zero(10), params, options);
    std::istringstream lines(log.str());
    std::string line;
    int count = 0;
    while (std::getline(lines, line)) {
        ++count;
        std::istringstream fields(line);
        int k = 0, inner = 0;
        double f = 0, rp = 0, rd = 0, seconds = 0;
        fields >> k >> f >> rp >> rd >> inner >> seconds;
        CHECK_FALSE(fields.fail());
        CHECK(k == count);
        CHECK(rp >= 0);
        CHECK(rd >= 0);
    }
    CHECK(count == rep.iterations);
}

TEST_CASE("iteration cap leaves a feasible unconverged answer") {
    const SyntheticInstance s = make_synthetic(30, 2, 16);
    const ObservationSet obs =
        observe(sample_uniform(30, 150, 17), s.d_true, 0.05, NoiseSpec{NoiseKind::gaussian, 18});
    ModelParams params;
    params.tol = 1e-12;
    params.max_iter = 3;
    const QuadraticProblem prob = build_problem(obs, initial_subspace(s.d_true, 2).basis, params);
    const SolveReport rep = solve(prob, SymmetricMatrix::zero(30), params);
    CHECK_FALSE(rep.converged);
    CHECK(rep.iterations == 3);
    CHECK(testing::min_centered_eigenvalue(-rep.d_star.matrix()) >= -1e-9);
}
