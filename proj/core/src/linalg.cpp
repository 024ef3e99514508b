//
// Copyright 2026 The edmc Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "edmc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "edmc/errors.hpp"

namespace edmc {

namespace {

void require_square(const Matrix& m) {
    if (m.rows() != m.cols()) {
        throw InvalidArgument("matrix is not square: " + std::to_string(m.rows()) + "x" +
                              std::to_string(m.cols()));
    }
    if (m.rows() < 2) {
        throw InvalidArgument("matrix order must be at least 2");
    }
    if (!m.allFinite()) {
        throw InvalidArgument("matrix has non-finite entries");
    }
}

void orient_columns(Matrix& v) {
    for (Index c = 0; c < v.cols(); ++c) {
        Index best = 0;
        double best_abs = -1.0;
        for (Index r = 0; r < v.rows(); ++r) {
            const double a = std::abs(v(r, c));
            if (a > best_abs) {
                best_abs = a;
                best = r;
            }
        }
        if (v(best, c) < 0.0) {
            v.col(c) = -v.col(c);
        }
    }
}

} // namespace

SymmetricMatrix::SymmetricMatrix(Matrix entries) : entries_(std::move(entries)) {
    require_square(entries_);
    for (Index j = 0; j < entries_.cols(); ++j) {
        for (Index i = j + 1; i < entries_.rows(); ++i) {
            if (entries_(i, j) != entries_(j, i)) {
                throw InvalidArgument("matrix is not symmetric at (" + std::to_string(i) + ", " +
                                      std::to_string(j) + ")");
            }
        }
    }
}

SymmetricMatrix SymmetricMatrix::zero(Index n) {
    return SymmetricMatrix(Matrix::Zero(n, n));
}

SymmetricMatrix SymmetricMatrix::identity(Index n) {
    return SymmetricMatrix(Matrix::Identity(n, n));
}

SymmetricMatrix SymmetricMatrix::symmetrize(const Matrix& a) {
    require_square(a);
    Matrix s = 0.5 * (a + a.transpose());
    return SymmetricMatrix(std::move(s), Trusted{});
}

HollowMatrix::HollowMatrix(SymmetricMatrix base) : base_(std::move(base)) {
    const double worst = base_.matrix().diagonal().cwiseAbs().maxCoeff();
    if (worst > kDiagonalTolerance) {
        throw InvalidArgument("matrix is not hollow: max |diag| = " + std::to_string(worst));
    }
}

Matrix centering_matrix(Index n) {
    Matrix j = Matrix::Constant(n, n, -1.0 / static_cast<double>(n));
    j.diagonal().array() += 1.0;
    return j;
}

namespace detail {

Matrix double_center(const Matrix& a) {
    const Vector row_mean = a.rowwise().mean();
    const Eigen::RowVectorXd col_mean = a.colwise().mean();
    const double grand = row_mean.mean();
    Matrix c = a;
    c.colwise() -= row_mean;
    c.rowwise() -= col_mean;
    c.array() += grand;
    return 0.5 * (c + c.transpose());
}

void eigen_sym(const Matrix& a, Vector& eigenvalues, Matrix& eigenvectors) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("symmetric eigendecomposition failed");
    }
    eigenvalues = solver.eigenvalues().reverse();
    eigenvectors = solver.eigenvectors().rowwise().reverse();
}

Matrix project_almost_psd(const Matrix& a, Vector* centered_eigenvalues,
                          Matrix* centered_eigenvectors) {
    const Matrix centered = double_center(a);
    Vector values;
    Matrix vectors;
    eigen_sym(centered, values, vectors);

    Index positive = 0;
    while (positive < values.size() && values(positive) > 0.0) {
        ++positive;
    }
    Matrix result = a - centered;
    if (positive > 0) {
        const auto lead = vectors.leftCols(positive);
        result.noalias() +=
            lead * values.head(positive).asDiagonal() * lead.transpose();
    }
    if (centered_eigenvalues != nullptr) {
        *centered_eigenvalues = std::move(values);
    }
    if (centered_eigenvectors != nullptr) {
        *centered_eigenvectors = std::move(vectors);
    }
    return 0.5 * (result + result.transpose());
}

} // namespace detail

SymmetricMatrix double_center(const SymmetricMatrix& a) {
    return SymmetricMatrix::symmetrize(detail::double_center(a.matrix()));
}

SymmetricMatrix hollow_complement(const HollowMatrix& x) {
    const Matrix centered = detail::double_center(x.matrix());
    return SymmetricMatrix::symmetrize(x.matrix() - centered);
}

Spectrum spectral_decomposition(const SymmetricMatrix& a) {
    Spectrum s;
    detail::eigen_sym(a.matrix(), s.eigenvalues, s.eigenvectors);
    orient_columns(s.eigenvectors);
    return s;
}

SymmetricMatrix project_psd(const SymmetricMatrix& a) {
    Vector values;
    Matrix vectors;
    detail::eigen_sym(a.matrix(), values, vectors);
    const Vector clipped = values.cwiseMax(0.0);
    return SymmetricMatrix::symmetrize(vectors * clipped.asDiagonal() * vectors.transpose());
}

SymmetricMatrix project_almost_psd(const SymmetricMatrix& a) {
    return SymmetricMatrix::symmetrize(detail::project_almost_psd(a.matrix()));
}

EdmCheck is_edm(const SymmetricMatrix& d, double tol) {
    EdmCheck check;
    const Matrix gram = -detail::double_center(d.matrix());
    Vector values;
    Matrix vectors;
    detail::eigen_sym(gram, values, vectors);
    const double lmax = values(0);
    const double lmin = values(values.size() - 1);

    const bool hollow = (d.matrix().diagonal().cwiseAbs().array() <= tol).all();
    check.is_edm = hollow && lmin >= -tol * (1.0 + std::max(lmax, 0.0));
    if (lmax > tol) {
        check.embedding_dim = (values.array() > tol * lmax).count();
    }
    return check;
}

EmbeddingResult cmds_embed(const SymmetricMatrix& d, Index k) {
    const Index n = d.size();
    if (k < 1 || k > n) {
        throw InvalidArgument("embedding dimension " + std::to_string(k) + " outside [1, " +
                              std::to_string(n) + "]");
    }
    HollowMatrix hollow{d};
    const SymmetricMatrix gram =
        SymmetricMatrix::symmetrize(-0.5 * detail::double_center(hollow.matrix()));

    EmbeddingResult out;
    out.spectrum = spectral_decomposition(gram);
    const Vector scale = out.spectrum.eigenvalues.head(k).cwiseMax(0.0).cwiseSqrt();
    out.points = out.spectrum.leading(k) * scale.asDiagonal();
    out.edm_scores = edm_scores(out.spectrum);
    return out;
}

double edm_score(const Spectrum& spectrum, Index k) {
    if (k < 0 || k > spectrum.size()) {
        throw InvalidArgument("EDM score index out of range");
    }
    const double total = spectrum.eigenvalues.sum();
    if (!(total > 0.0)) {
        throw InvalidArgument("EDM score undefined: total eigenvalue mass is not positive");
    }
    return spectrum.eigenvalues.head(k).sum() / total;
}

std::vector<double> edm_scores(const Spectrum& spectrum) {
    std::vector<double> scores;
    const double total = spectrum.eigenvalues.sum();
    if (!(total > 0.0)) {
        return scores;
    }
    scores.reserve(static_cast<std::size_t>(spectrum.size()));
    double running = 0.0;
    for (Index i = 0; i < spectrum.size(); ++i) {
        running += spectrum.eigenvalues(i);
        scores.push_back(running / total);
    }
    return scores;
}

Index numerical_rank(const Spectrum& spectrum) {
    const double scale = spectrum.eigenvalues.cwiseAbs().maxCoeff();
    if (scale == 0.0) {
        return 0;
    }
    return (spectrum.eigenvalues.array().abs() > kRankTolerance * scale).count();
}

SymmetricMatrix squared_distances(const Matrix& points) {
    const Index n = points.rows();
    Matrix d(n, n);
    for (Index i = 0; i < n; ++i) {
        d(i, i) = 0.0;
        for (Index j = i + 1; j < n; ++j) {
            const double v = (points.row(i) - points.row(j)).squaredNorm();
            d(i, j) = v;
            d(j, i) = v;
        }
    }
    return SymmetricMatrix(std::move(d));
}

} // namespace edmc
