//
// Copyright 2026 The edmc Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <vector>

#include <Eigen/Dense>

namespace edmc {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dense real symmetric matrix of order n >= 2.
///
/// Symmetry is exact: construction rejects any matrix with A(i,j) != A(j,i).
/// Use `symmetrize` to build one from a matrix carrying rounding asymmetry.
class SymmetricMatrix {
public:
    explicit SymmetricMatrix(Matrix entries);

    static SymmetricMatrix zero(Index n);
    static SymmetricMatrix identity(Index n);
    /// (A + A^T) / 2, after which symmetry holds bit-exactly.
    static SymmetricMatrix symmetrize(const Matrix& a);

    Index size() const noexcept { return entries_.rows(); }
    const Matrix& matrix() const noexcept { return entries_; }
    double operator()(Index i, Index j) const { return entries_(i, j); }
    double norm() const { return entries_.norm(); }

private:
    struct Trusted {};
    SymmetricMatrix(Matrix entries, Trusted) : entries_(std::move(entries)) {}

    Matrix entries_;
};

/// Symmetric matrix with zero diagonal (|a_ii| <= 1e-12).
class HollowMatrix {
public:
    static constexpr double kDiagonalTolerance = 1e-12;

    explicit HollowMatrix(SymmetricMatrix base);

    Index size() const noexcept { return base_.size(); }
    const SymmetricMatrix& base() const noexcept { return base_; }
    const Matrix& matrix() const noexcept { return base_.matrix(); }

private:
    SymmetricMatrix base_;
};

/// Eigenvalues in nonincreasing order with the matching orthonormal
/// eigenvectors as columns. Each eigenvector is oriented so that its
/// largest-magnitude entry is positive (ties go to the lowest index).
struct Spectrum {
    Vector eigenvalues;
    Matrix eigenvectors;

    Index size() const noexcept { return eigenvalues.size(); }
    /// Leading k eigenvectors.
    Matrix leading(Index k) const { return eigenvectors.leftCols(k); }
};

struct EmbeddingResult {
    Matrix points;                   // n x k
    Spectrum spectrum;               // of -1/2 J D J
    std::vector<double> edm_scores;  // EDMscore(1..n); empty when the trace is not positive
};

struct EdmCheck {
    bool is_edm = false;
    Index embedding_dim = 0;
};

/// Relative threshold below which an eigenvalue counts as zero for rank.
inline constexpr double kRankTolerance = 1e-10;

/// J = I - 11^T / n.
Matrix centering_matrix(Index n);

/// J A J.
SymmetricMatrix double_center(const SymmetricMatrix& a);

/// X - JXJ for hollow X. The result equals
/// 1/2 (diag(-JXJ) 1^T + 1 diag(-JXJ)^T) and has rank at most two.
SymmetricMatrix hollow_complement(const HollowMatrix& x);

/// Full eigendecomposition with the ordering and sign convention of Spectrum.
Spectrum spectral_decomposition(const SymmetricMatrix& a);

/// Nearest positive semidefinite matrix: V max(L, 0) V^T.
SymmetricMatrix project_psd(const SymmetricMatrix& a);

/// Nearest matrix whose quadratic form is nonnegative on the complement of
/// the all-ones vector: (A - JAJ) + project_psd(JAJ).
SymmetricMatrix project_almost_psd(const SymmetricMatrix& a);

/// D is an EDM iff its diagonal vanishes and -JDJ is PSD (both up to tol).
EdmCheck is_edm(const SymmetricMatrix& d, double tol);

/// Classical MDS on squared distances: eigendecompose -1/2 JDJ and scale the
/// leading k eigenvectors by sqrt(max(lambda, 0)).
EmbeddingResult cmds_embed(const SymmetricMatrix& d, Index k);

/// sum_{i<k} lambda_i / sum_i lambda_i. Throws InvalidArgument when the
/// total is not positive.
double edm_score(const Spectrum& spectrum, Index k);

/// EDMscore(1..n), or an empty vector when the trace is not positive.
std::vector<double> edm_scores(const Spectrum& spectrum);

/// #{i : |lambda_i| > kRankTolerance * max |lambda|}.
Index numerical_rank(const Spectrum& spectrum);

/// Squared Euclidean distances between the rows of `points`.
SymmetricMatrix squared_distances(const Matrix& points);

namespace detail {

// Raw helpers on Eigen matrices, shared by the solver modules. Inputs are
// assumed symmetric; outputs are symmetrized.

Matrix double_center(const Matrix& a);

/// Eigenvalues in nonincreasing order, no sign normalization.
void eigen_sym(const Matrix& a, Vector& eigenvalues, Matrix& eigenvectors);

/// Projection onto K+ that also hands back the spectrum of JAJ used for it.
Matrix project_almost_psd(const Matrix& a, Vector* centered_eigenvalues = nullptr,
                          Matrix* centered_eigenvectors = nullptr);

} // namespace detail

} // namespace edmc
