//
// Copyright 2026 The edmc Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "edmc/nearest_edm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "edmc/errors.hpp"

namespace edmc {

namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 30;

/// Pi_K(G + Diag(y)) together with the spectral data the Jacobian needs.
struct DualPoint {
    Vector y;
    Matrix x;
    Vector eigenvalues;  // of J(G + Diag y)J, nonincreasing
    Matrix eigenvectors;
    Vector grad;         // diag(X) - b: the gradient of phi = 1/2||X||^2 - b^T y
    double phi = 0.0;
};

void evaluate(const Matrix& g, const Vector& b, DualPoint& pt) {
    Matrix shifted = g;
    shifted.diagonal() += pt.y;
    pt.x = detail::project_almost_psd(shifted, &pt.eigenvalues, &pt.eigenvectors);
    pt.grad = pt.x.diagonal() - b;
    pt.phi = 0.5 * pt.x.squaredNorm() - b.dot(pt.y);
    if (!std::isfinite(pt.phi)) {
        throw NumericalError("non-finite value in the nearest-EDM dual");
    }
}

/// Generalized Jacobian of y -> diag(Pi_K(G + Diag y)) at a dual point.
///
/// Pi_K'(A)[H] = H - JHJ + P (Omega o (P^T JHJ P)) P^T where JAJ = P L P^T and
/// Omega is the first divided difference of max(., 0). Only the blocks that
/// touch a positive eigenvalue are nonzero, so the product costs O(n^2 p).
class Jacobian {
public:
    explicit Jacobian(const DualPoint& pt) {
        n_ = pt.eigenvalues.size();
        p_ = 0;
        while (p_ < n_ && pt.eigenvalues(p_) > 0.0) ++p_;
        pos_ = pt.eigenvectors.leftCols(p_);
        neg_ = pt.eigenvectors.rightCols(n_ - p_);
        // J on the inner side removes the all-ones direction from either block.
        pos_centered_ = pos_;
        pos_centered_.rowwise() -= pos_.colwise().mean();
        neg_centered_ = neg_;
        neg_centered_.rowwise() -= neg_.colwise().mean();
        omega_.resize(p_, n_ - p_);
        for (Index i = 0; i < p_; ++i) {
            const double li = pt.eigenvalues(i);
            for (Index j = 0; j < n_ - p_; ++j) {
                omega_(i, j) = li / (li - pt.eigenvalues(p_ + j));
            }
        }
    }

    void apply(const Vector& h, Vector& out) const {
        const double nn = static_cast<double>(n_);
        out = (2.0 / nn) * h;
        out.array() -= h.sum() / (nn * nn);
        if (p_ == 0) return;
        const Matrix hp = h.asDiagonal() * pos_centered_;
        const Matrix block_pp = pos_centered_.transpose() * hp;
        out += ((pos_ * block_pp).array() * pos_.array()).rowwise().sum().matrix();
        if (p_ < n_) {
            const Matrix block_pn = omega_.cwiseProduct(hp.transpose() * neg_centered_);
            out += 2.0 * ((pos_ * block_pn).array() * neg_.array()).rowwise().sum().matrix();
        }
    }

    Vector diagonal() const {
        const double nn = static_cast<double>(n_);
        Vector d = Vector::Constant(n_, 2.0 / nn - 1.0 / (nn * nn));
        if (p_ == 0) return d;
        const Matrix wp = pos_.cwiseProduct(pos_centered_);
        const Vector lead = wp.rowwise().sum();
        d += lead.cwiseAbs2();
        if (p_ < n_) {
            const Matrix wn = neg_.cwiseProduct(neg_centered_);
            d += 2.0 * ((wp * omega_).array() * wn.array()).rowwise().sum().matrix();
        }
        return d;
    }

private:
    Index n_ = 0;
    Index p_ = 0;
    Matrix pos_, neg_, pos_centered_, neg_centered_, omega_;
};

/// Preconditioned CG on (V + mu I) d = rhs.
Vector solve_newton_system(const Jacobian& jac, const Vector& rhs, double mu, double rel_tol,
                           int max_iter) {
    const Vector precond = (jac.diagonal().array() + mu).max(1e-12).inverse().matrix();
    Vector d = Vector::Zero(rhs.size());
    Vector r = rhs;
    Vector z = precond.cwiseProduct(r);
    Vector p = z;
    Vector vp;
    double rz = r.dot(z);
    const double stop = rel_tol * rhs.norm();
    for (int it = 0; it < max_iter && r.norm() > stop; ++it) {
        jac.apply(p, vp);
        vp += mu * p;
        const double curvature = p.dot(vp);
        if (!(curvature > 0.0)) break;
        const double step = rz / curvature;
        d += step * p;
        r -= step * vp;
        z = precond.cwiseProduct(r);
        const double rz_next = r.dot(z);
        p = z + (rz_next / rz) * p;
        rz = rz_next;
    }
    return d;
}

} // namespace

DualEvaluation dual_value_and_gradient(const SymmetricMatrix& g, const Vector& y,
                                       const std::optional<Vector>& diagonal) {
    const Index n = g.size();
    if (y.size() != n) throw InvalidArgument("dual vector length does not match matrix order");
    const Vector b = diagonal.value_or(Vector::Zero(n));
    if (b.size() != n) throw InvalidArgument("diagonal target has the wrong length");
    DualPoint pt;
    pt.y = y;
    evaluate(g.matrix(), b, pt);
    return {0.5 * g.matrix().squaredNorm() - pt.phi, -pt.grad};
}

ProjectionResult project_hollow_edm_cone(const SymmetricMatrix& g, double tolerance) {
    ProjectionOptions options;
    options.tolerance = tolerance;
    return project_hollow_edm_cone(g.matrix(), options);
}

ProjectionResult project_hollow_edm_cone(const Matrix& g, const ProjectionOptions& options,
                                         const Vector* warm_start) {
    const Index n = g.rows();
    if (g.cols() != n || n < 2) throw InvalidArgument("projection needs a square matrix, n >= 2");
    if (!(options.tolerance > 0.0)) throw InvalidArgument("inner tolerance must be positive");
    if (!g.allFinite()) throw NumericalError("projection input has non-finite entries");
    const Vector b = options.diagonal.value_or(Vector::Zero(n));
    if (b.size() != n) throw InvalidArgument("diagonal target has the wrong length");

    DualPoint current;
    current.y = (warm_start != nullptr && warm_start->size() == n) ? *warm_start : Vector::Zero(n);
    evaluate(g, b, current);

    ProjectionResult result;
    DualPoint trial;
    Vector vd;
    double best = current.grad.norm();
    while (current.grad.norm() > options.tolerance) {
        if (result.inner_iterations >= options.max_iterations) {
            throw ConvergenceError("nearest-EDM projection did not reach ||diag(X) - b|| <= " +
                                       std::to_string(options.tolerance) + " in " +
                                       std::to_string(options.max_iterations) + " iterations",
                                   best);
        }
        ++result.inner_iterations;

        const double gnorm = current.grad.norm();
        const Jacobian jac(current);
        const double mu = std::min(1e-2, gnorm);
        Vector direction =
            solve_newton_system(jac, -current.grad, mu, std::min(0.1, std::sqrt(gnorm)),
                                static_cast<int>(std::max<Index>(50, n)));
        double slope = current.grad.dot(direction);
        bool newton = true;
        if (!(slope < -1e-14 * gnorm * direction.norm())) {
            direction = -current.grad;
            slope = -gnorm * gnorm;
            newton = false;
        }

        double step = 1.0;
        bool accepted = false;
        for (int bt = 0; bt < kMaxBacktracks; ++bt) {
            trial.y = current.y + step * direction;
            evaluate(g, b, trial);
            if (trial.phi <= current.phi + kArmijo * step * slope) {
                accepted = true;
                break;
            }
            // Close to the solution the decrease in phi drowns in its rounding
            // error; fall back on the residual itself.
            const double noise = 1e-14 * (1.0 + std::abs(current.phi));
            if (trial.phi <= current.phi + noise && trial.grad.norm() < gnorm) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            // The dual gradient is 1-Lipschitz, so a unit gradient step never increases phi.
            trial.y = current.y - current.grad;
            evaluate(g, b, trial);
            newton = false;
        }
        if (newton) ++result.newton_steps;
        std::swap(current, trial);
        best = std::min(best, current.grad.norm());
    }

    result.x = std::move(current.x);
    result.y = std::move(current.y);
    result.primal_residual = current.grad.norm();
    return result;
}

} // namespace edmc
