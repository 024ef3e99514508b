//
// Copyright 2026 The edmc Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <optional>

#include "edmc/linalg.hpp"

namespace edmc {

/// Nearest point of {X : diag(X) = b, X in K+} to G, found by maximizing
///
///     theta(y) = -1/2 ||Pi_K(G + Diag(y))||^2 + 1/2 ||G||^2 + b^T y,
///
/// whose gradient is b - diag(Pi_K(G + Diag(y))). The returned X is always
/// Pi_K(G + Diag(y)), so it lies in K+ exactly; the diagonal constraint holds
/// to `ProjectionOptions::tolerance`.
struct ProjectionOptions {
    double tolerance = 1e-8;  // on ||diag(X) - b||
    int max_iterations = 200;
    std::optional<Vector> diagonal;  // b; zero when unset
};

struct ProjectionResult {
    Matrix x;
    Vector y;
    double primal_residual = 0.0;  // ||diag(X) - b||
    int inner_iterations = 0;
    int newton_steps = 0;          // iterations that accepted a Newton direction
};

struct DualEvaluation {
    double value;
    Vector gradient;
};

DualEvaluation dual_value_and_gradient(const SymmetricMatrix& g, const Vector& y,
                                       const std::optional<Vector>& diagonal = std::nullopt);

ProjectionResult project_hollow_edm_cone(const SymmetricMatrix& g, double tolerance);

/// Full-control overload. `warm_start` seeds y; it is ignored when its length
/// does not match.
ProjectionResult project_hollow_edm_cone(const Matrix& g, const ProjectionOptions& options,
                                         const Vector* warm_start = nullptr);

} // namespace edmc
