//
// Copyright 2026 The edmc Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "edmc/iapg.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <string>

#include "edmc/errors.hpp"
#include "edmc/io.hpp"

namespace edmc {

double momentum_next(double t) {
    return 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
}

Matrix extrapolate(const Matrix& x_curr, const Matrix& x_prev, double t_curr, double t_next) {
    return x_curr + ((t_curr - 1.0) / t_next) * (x_curr - x_prev);
}

Residuals residuals(const QuadraticProblem& problem, const Matrix& x, const Matrix& g,
                    const Vector& y_dual) {
    Matrix grad;
    problem.gradient(x, grad);
    Matrix z = x - g;
    z.diagonal() -= y_dual;
    Matrix r = grad - z;
    r.diagonal() -= y_dual;
    return {x.diagonal().norm(), r.norm() / (1.0 + problem.cost_norm())};
}

double inner_tolerance(int k, double tol, const SolverOptions& options) {
    if (options.exact_inner) return options.inner_floor;
    const double eps = options.inner_scale * tol / std::pow(static_cast<double>(k), options.inner_decay);
    return std::max(eps, options.inner_floor);
}

SolveReport solve(const QuadraticProblem& problem, const SymmetricMatrix& x0,
                  const ModelParams& params, const SolverOptions& options) {
    params.validate();
    if (x0.size() != problem.n()) throw InvalidArgument("starting point has the wrong order");
    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };

    SolverState state;
    state.x_prev = x0.matrix();
    state.y = x0.matrix();
    state.y_dual = Vector::Zero(problem.n());

    SolveReport report{SymmetricMatrix::zero(problem.n()), 0, {}, {}, 0, 0.0, false};
    Matrix grad, g;
    ProjectionOptions inner;
    inner.max_iterations = options.inner_max_iterations;
    double previous_objective = problem.objective(x0.matrix());

    for (state.k = 1; state.k <= params.max_iter; ++state.k) {
        problem.gradient(state.y, grad);
        g = state.y - grad;
        inner.tolerance = inner_tolerance(state.k, params.tol, options);
        ProjectionResult proj = project_hollow_edm_cone(g, inner, &state.y_dual);
        report.inner_iterations += proj.inner_iterations;

        state.x_curr = std::move(proj.x);
        state.y_dual = std::move(proj.y);
        state.residuals = residuals(problem, state.x_curr, g, state.y_dual);
        const double f = problem.objective(state.x_curr);
        if (!std::isfinite(f)) {
            throw NumericalError("objective became non-finite at iteration " +
                                 std::to_string(state.k));
        }
        state.objective.push_back(f);
        if (options.log != nullptr) {
            *options.log << state.k << ' ' << format_double(f) << ' '
                         << format_double(state.residuals.primal) << ' '
                         << format_double(state.residuals.dual) << ' ' << proj.inner_iterations
                         << ' ' << elapsed() << '\n';
        }
        if (std::max(state.residuals.primal, state.residuals.dual) <= params.tol) {
            report.converged = true;
            break;
        }

        state.t_prev = state.t_curr;
        state.t_curr = momentum_next(state.t_prev);
        if (options.adaptive_restart && f > previous_objective) {
            state.t_prev = 1.0;
            state.t_curr = 1.0;
        }
        previous_objective = f;
        state.y = extrapolate(state.x_curr, state.x_prev, state.t_prev, state.t_curr);
        std::swap(state.x_prev, state.x_curr);
    }

    report.iterations = std::min(state.k, params.max_iter);
    report.residuals = state.residuals;
    report.objective = std::move(state.objective);
    report.wall_seconds = elapsed();
    const Matrix& x_final = report.converged ? state.x_curr : state.x_prev;
    report.d_star = SymmetricMatrix::symmetrize(-x_final);
    return report;
}

} // namespace edmc
