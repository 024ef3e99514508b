//
// Copyright 2026 The edmc Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "edmc/linalg.hpp"
#include "edmc/sampling.hpp"

namespace edmc {

/// Estimator and solver parameters.
///
/// rho1 weights the spectral penalty, rho2 the reward for mass inside the
/// initial subspace (0: nuclear norm, 1: default, 2: minimum-volume-like).
struct ModelParams {
    double rho1 = 0.0;
    double rho2 = 1.0;
    double kappa = 2.0;
    double c_rho = 1.0;
    double eta = 0.0;
    Index rank = 2;
    double tol = 1e-3;
    int max_iter = 2000;

    /// Throws InvalidArgument when an invariant fails.
    void validate() const;
};

inline constexpr double kRho2NuclearNorm = 0.0;
inline constexpr double kRho2Default = 1.0;
inline constexpr double kRho2MinimumVolume = 2.0;

/// Contents of a flat "key = value" parameter file. Keys absent from the file
/// stay unset so callers can layer defaults, files, and flags.
struct ParameterFile {
    std::optional<double> rho1, rho2, kappa, c_rho, eta, tol;
    std::optional<Index> rank;
    std::optional<int> max_iter;
    std::optional<std::uint64_t> seed;

    void apply_to(ModelParams& params) const;
};

ParameterFile read_parameter_file(std::istream& in);

/// min 1/2 ||O(X) - a||^2 + <C, X>  s.t. diag(X) = 0, X in K+,
/// in the variable X = -D with a = -(y o y) and C = m rho1 J (I - rho2 P P^T) J.
class QuadraticProblem {
public:
    QuadraticProblem(Index n, std::vector<IndexPair> pairs, Vector target, Matrix cost);

    Index n() const noexcept { return n_; }
    const std::vector<IndexPair>& pairs() const noexcept { return pairs_; }
    const Vector& target() const noexcept { return target_; }
    const Matrix& cost() const noexcept { return cost_; }
    double cost_norm() const noexcept { return cost_norm_; }

    double objective(const Matrix& x) const;
    /// A*(A(X) - a) + C, written into `grad` (resized as needed).
    void gradient(const Matrix& x, Matrix& grad) const;

private:
    Index n_;
    std::vector<IndexPair> pairs_;
    Vector target_;
    Matrix cost_;
    double cost_norm_;
};

QuadraticProblem build_problem(const ObservationSet& obs, const Matrix& subspace,
                               const ModelParams& params);

/// Direct evaluation of
/// 1/(2m) ||y o y - O(D)||^2 + rho1 (<I, -JDJ> - rho2 <P P^T, -JDJ>).
double estimator_objective(const ObservationSet& obs, const Matrix& subspace,
                           const ModelParams& params, const SymmetricMatrix& d);

struct ObjectiveGradient {
    double value;
    SymmetricMatrix gradient;
};

ObjectiveGradient objective_and_gradient(const QuadraticProblem& problem,
                                         const SymmetricMatrix& x);

/// rho1 = c_rho kappa eta sqrt(log(2n) / (m n)) max_l y_l.
double estimate_rho1(const ObservationSet& obs, double kappa, double c_rho, double eta_hat);

/// 1.4826 * MAD of y_l against the pair distances of the rank-`rank`
/// classical MDS configuration of D_init. Biased upward when D_init is.
double estimate_noise_scale(const ObservationSet& obs, const SymmetricMatrix& d_init,
                            Index rank);

/// ||P P^T - rho2 Q Q^T|| / sqrt(2r).
double alpha(const Matrix& true_basis, const Matrix& init_basis, double rho2);

/// <P P^T, Q Q^T> / r, the minimizer of alpha.
double rho2_star(const Matrix& true_basis, const Matrix& init_basis);

struct AlphaOrdering {
    bool precondition_met = false;
    bool holds = false;  // alpha(1) < min(alpha(0), alpha(2)), meaningful only when met
    double alpha0 = 0.0;
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double perturbation = 0.0;  // ||D_init - D_true||
    double lambda_r = 0.0;      // r-th eigenvalue of -J D_true J
};

AlphaOrdering verify_alpha_ordering(const SymmetricMatrix& d_true, const SymmetricMatrix& d_init,
                                    Index r);

} // namespace edmc
