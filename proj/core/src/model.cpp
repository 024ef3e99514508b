//
// Copyright 2026 The edmc Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "edmc/model.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <string>

#include "edmc/errors.hpp"
#include "edmc/io.hpp"

namespace edmc {

namespace {

void check_basis(const Matrix& basis, Index n, const char* what) {
    if (basis.rows() != n) {
        throw InvalidArgument(std::string(what) + " has " + std::to_string(basis.rows()) +
                              " rows, expected " + std::to_string(n));
    }
    if (basis.cols() < 1) {
        throw InvalidArgument(std::string(what) + " has no columns");
    }
}

double median(std::vector<double> v) {
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    if (v.size() % 2 == 1) return *mid;
    const double upper = *mid;
    const double lower = *std::max_element(v.begin(), mid);
    return 0.5 * (lower + upper);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

} // namespace

void ModelParams::validate() const {
    if (!(rho1 >= 0.0)) throw InvalidArgument("rho1 must be nonnegative");
    if (!(rho2 >= 0.0)) throw InvalidArgument("rho2 must be nonnegative");
    if (!(kappa > 1.0)) throw InvalidArgument("kappa must exceed 1");
    if (!(c_rho >= 0.0)) throw InvalidArgument("c_rho must be nonnegative");
    if (!(eta >= 0.0)) throw InvalidArgument("eta must be nonnegative");
    if (rank < 1) throw InvalidArgument("rank must be at least 1");
    if (!(tol > 0.0)) throw InvalidArgument("tol must be positive");
    if (max_iter < 1) throw InvalidArgument("max_iter must be at least 1");
}

void ParameterFile::apply_to(ModelParams& params) const {
    if (rho1) params.rho1 = *rho1;
    if (rho2) params.rho2 = *rho2;
    if (kappa) params.kappa = *kappa;
    if (c_rho) params.c_rho = *c_rho;
    if (eta) params.eta = *eta;
    if (tol) params.tol = *tol;
    if (rank) params.rank = *rank;
    if (max_iter) params.max_iter = *max_iter;
}

ParameterFile read_parameter_file(std::istream& in) {
    ParameterFile file;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw InvalidArgument("parameter file line " + std::to_string(line_no) +
                                  ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string text = trim(line.substr(eq + 1));
        double value = 0.0;
        try {
            value = parse_double(text);
        } catch (const IoError&) {
            throw InvalidArgument("parameter file line " + std::to_string(line_no) +
                                  ": bad value '" + text + "'");
        }
        auto integral = [&](const char* name) {
            if (value != std::floor(value) || value < 0) {
                throw InvalidArgument(std::string(name) + " must be a nonnegative integer");
            }
            return value;
        };
        if (key == "rho1") file.rho1 = value;
        else if (key == "rho2") file.rho2 = value;
        else if (key == "kappa") file.kappa = value;
        else if (key == "c_rho") file.c_rho = value;
        else if (key == "eta") file.eta = value;
        else if (key == "tol") file.tol = value;
        else if (key == "rank") file.rank = static_cast<Index>(integral("rank"));
        else if (key == "max_iter") file.max_iter = static_cast<int>(integral("max_iter"));
        else if (key == "seed") file.seed = static_cast<std::uint64_t>(integral("seed"));
        else {
            throw InvalidArgument("parameter file line " + std::to_string(line_no) +
                                  ": unknown key '" + key + "'");
        }
    }
    return file;
}

QuadraticProblem::QuadraticProblem(Index n, std::vector<IndexPair> pairs, Vector target,
                                   Matrix cost)
    : n_(n), pairs_(std::move(pairs)), target_(std::move(target)), cost_(std::move(cost)) {
    if (static_cast<Index>(pairs_.size()) != target_.size()) {
        throw InvalidArgument("target length does not match the observation count");
    }
    if (cost_.rows() != n_ || cost_.cols() != n_) {
        throw InvalidArgument("cost matrix has the wrong order");
    }
    cost_norm_ = cost_.norm();
}

double QuadraticProblem::objective(const Matrix& x) const {
    double fit = 0.0;
    for (std::size_t l = 0; l < pairs_.size(); ++l) {
        const double r = x(pairs_[l].i, pairs_[l].j) - target_(static_cast<Index>(l));
        fit += r * r;
    }
    return 0.5 * fit + (cost_.array() * x.array()).sum();
}

void QuadraticProblem::gradient(const Matrix& x, Matrix& grad) const {
    grad = cost_;
    for (std::size_t l = 0; l < pairs_.size(); ++l) {
        const auto& p = pairs_[l];
        const double half = 0.5 * (x(p.i, p.j) - target_(static_cast<Index>(l)));
        grad(p.i, p.j) += half;
        grad(p.j, p.i) += half;
    }
}

QuadraticProblem build_problem(const ObservationSet& obs, const Matrix& subspace,
                               const ModelParams& params) {
    params.validate();
    const Index n = obs.n();
    check_basis(subspace, n, "subspace basis");
    if (obs.m() < 1) throw InvalidArgument("no observations");

    const Vector target = -obs.values().array().square().matrix();
    Matrix inner = Matrix::Identity(n, n);
    inner.noalias() -= params.rho2 * subspace * subspace.transpose();
    const Matrix cost = static_cast<double>(obs.m()) * params.rho1 * detail::double_center(inner);
    return QuadraticProblem(n, obs.pairs(), target, cost);
}

double estimator_objective(const ObservationSet& obs, const Matrix& subspace,
                           const ModelParams& params, const SymmetricMatrix& d) {
    check_basis(subspace, obs.n(), "subspace basis");
    const Vector residual = obs.values().array().square().matrix() - apply_O(obs, d);
    const Matrix gram = -detail::double_center(d.matrix());
    const double trace_term = gram.trace();
    const double subspace_term = (subspace.transpose() * gram * subspace).trace();
    return residual.squaredNorm() / (2.0 * static_cast<double>(obs.m())) +
           params.rho1 * (trace_term - params.rho2 * subspace_term);
}

ObjectiveGradient objective_and_gradient(const QuadraticProblem& problem,
                                         const SymmetricMatrix& x) {
    if (x.size() != problem.n()) throw InvalidArgument("matrix order does not match problem");
    Matrix grad;
    problem.gradient(x.matrix(), grad);
    return {problem.objective(x.matrix()), SymmetricMatrix(std::move(grad))};
}

double estimate_rho1(const ObservationSet& obs, double kappa, double c_rho, double eta_hat) {
    if (obs.m() < 1) throw InvalidArgument("rho1 estimate needs at least one observation");
    if (!(eta_hat >= 0.0)) throw InvalidArgument("noise scale must be nonnegative");
    const double n = static_cast<double>(obs.n());
    const double m = static_cast<double>(obs.m());
    const double omega = obs.values().maxCoeff();
    return c_rho * kappa * eta_hat * omega * std::sqrt(std::log(2.0 * n) / (m * n));
}

double estimate_noise_scale(const ObservationSet& obs, const SymmetricMatrix& d_init,
                            Index rank) {
    if (obs.m() < 1) throw InvalidArgument("noise estimate needs at least one observation");
    if (rank < 1 || rank > obs.n()) throw InvalidArgument("noise estimate rank out of range");
    // A shortest-path initializer reproduces nearly every observed edge, so
    // compare against its rank-r configuration instead.
    const Matrix points = cmds_embed(d_init, rank).points;
    std::vector<double> residuals;
    residuals.reserve(static_cast<std::size_t>(obs.m()));
    for (Index l = 0; l < obs.m(); ++l) {
        const auto& p = obs.pairs()[static_cast<std::size_t>(l)];
        residuals.push_back(obs.values()(l) - (points.row(p.i) - points.row(p.j)).norm());
    }
    const double center = median(residuals);
    for (auto& r : residuals) r = std::abs(r - center);
    return 1.4826 * median(std::move(residuals));
}

double alpha(const Matrix& true_basis, const Matrix& init_basis, double rho2) {
    if (true_basis.cols() != init_basis.cols() || true_basis.rows() != init_basis.rows()) {
        throw InvalidArgument("alpha needs bases of equal shape");
    }
    const auto r = static_cast<double>(true_basis.cols());
    const Matrix diff = true_basis * true_basis.transpose() -
                        rho2 * init_basis * init_basis.transpose();
    return diff.norm() / std::sqrt(2.0 * r);
}

double rho2_star(const Matrix& true_basis, const Matrix& init_basis) {
    if (true_basis.cols() != init_basis.cols() || true_basis.rows() != init_basis.rows()) {
        throw InvalidArgument("rho2_star needs bases of equal shape");
    }
    // <P P^T, Q Q^T> = ||P^T Q||^2.
    const auto r = static_cast<double>(true_basis.cols());
    return (true_basis.transpose() * init_basis).squaredNorm() / r;
}

AlphaOrdering verify_alpha_ordering(const SymmetricMatrix& d_true, const SymmetricMatrix& d_init,
                                    Index r) {
    if (d_true.size() != d_init.size()) throw InvalidArgument("matrix orders differ");
    if (r < 1 || r >= d_true.size()) throw InvalidArgument("rank outside [1, n)");

    const Spectrum truth = spectral_decomposition(
        SymmetricMatrix::symmetrize(-detail::double_center(d_true.matrix())));
    AlphaOrdering out;
    out.lambda_r = truth.eigenvalues(r - 1);
    out.perturbation = (d_init.matrix() - d_true.matrix()).norm();
    out.precondition_met = out.perturbation < out.lambda_r / 2.0;
    if (!out.precondition_met) return out;

    const Spectrum init = spectral_decomposition(
        SymmetricMatrix::symmetrize(-detail::double_center(d_init.matrix())));
    const Matrix p = truth.leading(r);
    const Matrix q = init.leading(r);
    out.alpha0 = alpha(p, q, 0.0);
    out.alpha1 = alpha(p, q, 1.0);
    out.alpha2 = alpha(p, q, 2.0);
    out.holds = out.alpha1 < std::min(out.alpha0, out.alpha2);
    return out;
}

} // namespace edmc
