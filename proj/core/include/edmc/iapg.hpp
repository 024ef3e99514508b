//
// Copyright 2026 The edmc Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <iosfwd>
#include <vector>

#include "edmc/linalg.hpp"
#include "edmc/model.hpp"
#include "edmc/nearest_edm.hpp"

namespace edmc {

/// t_{k+1} = (1 + sqrt(1 + 4 t_k^2)) / 2.
double momentum_next(double t);

/// Y_{k+1} = X_k + (t_k - 1) / t_{k+1} (X_k - X_{k-1}).
Matrix extrapolate(const Matrix& x_curr, const Matrix& x_prev, double t_curr, double t_next);

struct Residuals {
    double primal = 0.0;  // ||diag(X)||
    double dual = 0.0;    // ||grad f(X) - Diag(y) - Z|| / (1 + ||C||)
};

/// Infeasibility measures at X = Pi_K(G + Diag(y)), where G = Y - grad f(Y)
/// was the subproblem input. Z is recovered from the subproblem optimality
/// conditions as Z = X - G - Diag(y).
Residuals residuals(const QuadraticProblem& problem, const Matrix& x, const Matrix& g,
                    const Vector& y_dual);

struct SolverOptions {
    /// Inner accuracy at outer iteration k is inner_scale * tol / k^inner_decay.
    double inner_scale = 0.1;
    double inner_decay = 1.2;
    /// Floor on the inner tolerance; also the tolerance used when exact_inner is set.
    double inner_floor = 1e-12;
    bool exact_inner = false;
    int inner_max_iterations = 200;
    /// Reset momentum whenever the objective increases. Off reproduces plain APG.
    bool adaptive_restart = false;
    /// One line per iteration: k, f, R_p, R_d, inner iterations, elapsed seconds.
    std::ostream* log = nullptr;
};

/// Inner tolerance schedule eps_0 / k^decay with eps_0 = inner_scale * tol.
double inner_tolerance(int k, double tol, const SolverOptions& options);

struct SolverState {
    Matrix x_curr;
    Matrix x_prev;
    Matrix y;
    double t_curr = 1.0;
    double t_prev = 1.0;
    int k = 0;
    Vector y_dual;
    Residuals residuals;
    std::vector<double> objective;
};

struct SolveReport {
    SymmetricMatrix d_star;
    int iterations = 0;
    Residuals residuals;
    std::vector<double> objective;
    int inner_iterations = 0;  // summed over outer iterations
    double wall_seconds = 0.0;
    bool converged = false;
};

/// Accelerated proximal gradient with Q_k = I: each step projects
/// Y_k - grad f(Y_k) onto {diag = 0} intersected with K+, stopping once
/// max(R_p, R_d) <= params.tol or after params.max_iter iterations.
SolveReport solve(const QuadraticProblem& problem, const SymmetricMatrix& x0,
                  const ModelParams& params, const SolverOptions& options = {});

} // namespace edmc
