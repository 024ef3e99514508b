//
// Copyright 2026 The edmc Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>

#include <doctest.h>

#include "edmc/errors.hpp"
#include "edmc/linalg.hpp"
#include "test_support.hpp"

using namespace edmc;
using edmc::testing::random_hollow;
using edmc::testing::random_matrix;
using edmc::testing::random_symmetric;

namespace {

SymmetricMatrix sym(std::initializer_list<std::initializer_list<double>> rows) {
    const Index n = static_cast<Index>(rows.size());
    Matrix m(n, n);
    Index i = 0;
    for (const auto& row : rows) {
        Index j = 0;
        for (double v : row) m(i, j++) = v;
        ++i;
    }
    return SymmetricMatrix(m);
}

Matrix random_almost_psd(Index n, Rng& rng) {
    const Matrix w = random_matrix(n, n, rng);
    const Matrix j = centering_matrix(n);
    const Matrix m = random_symmetric(n, rng);
    return j * w * w.transpose() * j + (m - j * m * j);
}

} // namespace

TEST_CASE("symmetric matrix construction") {
    Matrix m(2, 2);
    m << 1, 2, 2.0000001, 1;
    CHECK_THROWS_AS(SymmetricMatrix{m}, InvalidArgument);
    CHECK_THROWS_AS(SymmetricMatrix{Matrix::Zero(1, 1)}, InvalidArgument);
    CHECK_THROWS_AS(SymmetricMatrix{Matrix::Zero(2, 3)}, InvalidArgument);
    const SymmetricMatrix s = SymmetricMatrix::symmetrize(m);
    CHECK(s(0, 1) == s(1, 0));
    CHECK_THROWS_AS(HollowMatrix{SymmetricMatrix::identity(3)}, InvalidArgument);
}

TEST_CASE("double_center examples") {
    const SymmetricMatrix a = sym({{1, 0}, {0, 0}});
    const Matrix expected = testing::reference_double_center(a.matrix());
    CHECK((double_center(a).matrix() - expected).norm() < 1e-15);
    CHECK(double_center(a)(0, 0) == doctest::Approx(0.25));
    CHECK(double_center(a)(0, 1) == doctest::Approx(-0.25));

    Rng rng(3);
    const SymmetricMatrix centered = double_center(SymmetricMatrix(random_symmetric(7, rng)));
    CHECK((double_center(centered).matrix() - centered.matrix()).norm() < 1e-12);
    CHECK((centered.matrix() * Vector::Ones(7)).norm() < 1e-10);

    for (int trial = 0; trial < 20; ++trial) {
        const Index n = 2 + trial;
        const Matrix r = random_symmetric(n, rng);
        const Matrix ref = testing::reference_double_center(r);
        CHECK((double_center(SymmetricMatrix(r)).matrix() - ref).norm() < 1e-10 * (1 + r.norm()));
    }
}

TEST_CASE("centering matrix identities") {
    for (Index n = 2; n <= 50; ++n) {
        const Matrix j = centering_matrix(n);
        CHECK((j * j - j).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((j * Vector::Ones(n)).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("hollow_complement") {
    CHECK(hollow_complement(HollowMatrix(SymmetricMatrix::zero(3))).norm() == 0.0);
    const SymmetricMatrix x = sym({{0, 1}, {1, 0}});
    const SymmetricMatrix h = hollow_complement(HollowMatrix(x));
    CHECK((h.matrix() - Matrix::Constant(2, 2, 0.5)).norm() < 1e-15);

    Rng rng(4);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix xh = random_hollow(8, rng);
        const Matrix c = hollow_complement(HollowMatrix(SymmetricMatrix(xh))).matrix();
        Eigen::JacobiSVD<Matrix> svd(c);
        const Vector s = svd.singularValues();
        CHECK(s(2) < 1e-10 * (1 + s(0)));
        const Matrix jxj = testing::reference_double_center(xh);
        const Vector d = -jxj.diagonal();
        const Matrix formula =
            0.5 * (d * Vector::Ones(8).transpose() + Vector::Ones(8) * d.transpose());
        CHECK((c - formula).norm() < 1e-10);
        // Orthogonality and Pythagoras.
        CHECK(std::abs((jxj.array() * c.array()).sum()) < 1e-8 * (1 + xh.squaredNorm()));
        CHECK(std::abs(xh.squaredNorm() - c.squaredNorm() - jxj.squaredNorm()) <
              1e-8 * xh.squaredNorm());
    }
    CHECK_THROWS_AS(HollowMatrix(sym({{1, 0}, {0, 0}})), InvalidArgument);
}

TEST_CASE("spectral decomposition invariants") {
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const SymmetricMatrix a(random_symmetric(9, rng));
        const Spectrum s = spectral_decomposition(a);
        for (Index i = 0; i + 1 < s.size(); ++i) CHECK(s.eigenvalues(i) >= s.eigenvalues(i + 1));
        const Matrix& v = s.eigenvectors;
        CHECK((v.transpose() * v - Matrix::Identity(9, 9)).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK((v * s.eigenvalues.asDiagonal() * v.transpose() - a.matrix()).norm() <=
              1e-8 * (1 + a.norm()));
        for (Index c = 0; c < 9; ++c) {
            Index arg = 0;
            v.col(c).cwiseAbs().maxCoeff(&arg);
            CHECK(v(arg, c) > 0);
        }
    }
}

TEST_CASE("project_psd") {
    CHECK((project_psd(sym({{1, 0}, {0, -1}})).matrix() - sym({{1, 0}, {0, 0}}).matrix()).norm() <
          1e-15);
    const SymmetricMatrix swap = sym({{0, 1}, {1, 0}});
    CHECK((project_psd(swap).matrix() - Matrix::Constant(2, 2, 0.5)).norm() < 1e-14);

    Rng rng(6);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix w = random_matrix(6, 6, rng);
        const SymmetricMatrix psd = SymmetricMatrix::symmetrize(w * w.transpose());
        CHECK((project_psd(psd).matrix() - psd.matrix()).norm() < 1e-10 * (1 + psd.norm()));

        const SymmetricMatrix a(random_symmetric(6, rng));
        const Matrix p = project_psd(a).matrix();
        Eigen::SelfAdjointEigenSolver<Matrix> es(p);
        CHECK(es.eigenvalues().minCoeff() >= -1e-10);
        const double inner = ((a.matrix() - p).array() * p.array()).sum();
        CHECK(std::abs(inner) <= 1e-8 * (1 + a.matrix().squaredNorm()));
    }
}

TEST_CASE("project_almost_psd against the basis-change oracle") {
    const SymmetricMatrix feasible = sym({{0, -1}, {-1, 0}});
    const Vector x = Vector::Constant(2, 1 / std::sqrt(2.0)).cwiseProduct(Vector{{1.0, -1.0}});
    CHECK(x.dot(feasible.matrix() * x) == doctest::Approx(1.0));
    CHECK((project_almost_psd(feasible).matrix() - feasible.matrix()).norm() < 1e-14);
    CHECK(project_almost_psd(SymmetricMatrix::zero(3)).norm() == 0.0);

    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const Index n = 3 + trial % 4;
        const SymmetricMatrix a(random_symmetric(n, rng));
        const Matrix r = project_almost_psd(a).matrix();
        const Matrix oracle = testing::reference_project_almost_psd(a.matrix());
        CHECK((r - oracle).norm() < 1e-8);
        CHECK(testing::min_centered_eigenvalue(r) >= -1e-8 * a.norm());
        // Variational inequality against sampled feasible points. K+ is a cone,
        // so <A - R, R> = 0 as well.
        for (int s = 0; s < 5; ++s) {
            const Matrix b = random_almost_psd(n, rng);
            CHECK(((a.matrix() - r).array() * (b - r).array()).sum() <= 1e-8);
        }
        CHECK(std::abs(((a.matrix() - r).array() * r.array()).sum()) < 1e-8 * (1 + a.norm()));
    }
}

TEST_CASE("project_almost_psd is idempotent and nonexpansive") {
    Rng rng(8);
    for (int trial = 0; trial < 30; ++trial) {
        const SymmetricMatrix a(random_symmetric(6, rng));
        const SymmetricMatrix b(random_symmetric(6, rng));
        const SymmetricMatrix pa = project_almost_psd(a);
        CHECK((project_almost_psd(pa).matrix() - pa.matrix()).norm() < 1e-10);
        const double lhs = (pa.matrix() - project_almost_psd(b).matrix()).norm();
        CHECK(lhs <= (a.matrix() - b.matrix()).norm() + 1e-8);
    }
}

TEST_CASE("is_edm") {
    auto one = is_edm(sym({{0, 1}, {1, 0}}), 1e-10);
    CHECK(one.is_edm);
    CHECK(one.embedding_dim == 1);
    auto line = is_edm(sym({{0, 1, 4}, {1, 0, 1}, {4, 1, 0}}), 1e-10);
    CHECK(line.is_edm);
    CHECK(line.embedding_dim == 1);
    CHECK_FALSE(is_edm(sym({{0, -1}, {-1, 0}}), 1e-10).is_edm);
    CHECK_FALSE(is_edm(sym({{0.1, 1}, {1, 0}}), 1e-10).is_edm);
    CHECK(is_edm(SymmetricMatrix::zero(4), 1e-10).embedding_dim == 0);

    Rng rng(9);
    for (Index dim = 1; dim <= 4; ++dim) {
        const Matrix pts = random_matrix(12, dim, rng);
        const EdmCheck check = is_edm(squared_distances(pts), 1e-9);
        CHECK(check.is_edm);
        CHECK(check.embedding_dim <= dim);
        CHECK(check.embedding_dim == dim);
    }
}

TEST_CASE("cmds_embed") {
    const EmbeddingResult two = cmds_embed(sym({{0, 1}, {1, 0}}), 1);
    CHECK(std::abs(two.points(0, 0)) == doctest::Approx(0.5));
    CHECK(two.points(0, 0) == doctest::Approx(-two.points(1, 0)));
    CHECK(two.spectrum.eigenvalues(0) == doctest::Approx(0.5));
    CHECK(std::abs(two.spectrum.eigenvalues(1)) < 1e-15);

    CHECK(cmds_embed(SymmetricMatrix::zero(3), 1).points.norm() == 0.0);
    CHECK(cmds_embed(SymmetricMatrix::zero(3), 1).edm_scores.empty());

    const SymmetricMatrix tri = sym({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
    const EmbeddingResult e = cmds_embed(tri, 2);
    const SymmetricMatrix back = squared_distances(e.points);
    CHECK((back.matrix() - tri.matrix()).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(e.edm_scores.back() == doctest::Approx(1.0));

    CHECK_THROWS_AS(cmds_embed(tri, 4), InvalidArgument);
    CHECK_THROWS_AS(cmds_embed(tri, 0), InvalidArgument);
    CHECK_THROWS_AS(cmds_embed(sym({{1, 1}, {1, 0}}), 1), InvalidArgument);

    Rng rng(10);
    for (int trial = 0; trial < 5; ++trial) {
        const Matrix pts = random_matrix(10, 3, rng);
        const SymmetricMatrix d = squared_distances(pts);
        const EmbeddingResult out = cmds_embed(d, 3);
        CHECK((squared_distances(out.points).matrix() - d.matrix()).norm() < 1e-6);
        const Vector lam = out.spectrum.eigenvalues.head(3);
        const Matrix p1 = out.spectrum.leading(3);
        const Matrix gram = p1 * lam.asDiagonal() * p1.transpose();
        CHECK((out.points * out.points.transpose() - gram).norm() <= 1e-8 * (1 + lam(0)));
        for (std::size_t k = 1; k < out.edm_scores.size(); ++k)
            CHECK(out.edm_scores[k] >= out.edm_scores[k - 1] - 1e-15);
        // Embedding its own output again gives the same configuration.
        const EmbeddingResult again = cmds_embed(squared_distances(out.points), 3);
        CHECK((again.points - out.points).cwiseAbs().maxCoeff() < 1e-6);
    }
}

TEST_CASE("cmds_embed reports negative eigenvalues raw") {
    // A non-EDM hollow matrix: the triangle inequality fails for unsquared 1, 1, 3.
    const SymmetricMatrix d = sym({{0, 1, 9}, {1, 0, 1}, {9, 1, 0}});
    const EmbeddingResult e = cmds_embed(d, 3);
    CHECK(e.spectrum.eigenvalues(2) < 0);
    CHECK(e.points.col(2).norm() == 0.0);
}

TEST_CASE("edm_score") {
    Spectrum s{Vector{{3.0, 1.0, 0.0, 0.0}}, Matrix::Identity(4, 4)};
    CHECK(edm_score(s, 1) == doctest::Approx(0.75));
    CHECK(edm_score(s, 2) == doctest::Approx(1.0));
    CHECK(edm_scores(s).size() == 4);
    CHECK(numerical_rank(s) == 2);
    Spectrum zero{Vector::Zero(3), Matrix::Identity(3, 3)};
    CHECK_THROWS_AS(edm_score(zero, 1), InvalidArgument);
    CHECK(edm_scores(zero).empty());
    CHECK_THROWS_AS(edm_score(s, 5), InvalidArgument);
}
