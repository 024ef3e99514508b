//
// Copyright 2026 The edmc Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <limits>
#include <sstream>

#include <doctest.h>

#include "edmc/errors.hpp"
#include "edmc/graph.hpp"
#include "test_support.hpp"

using namespace edmc;

namespace {

// Floyd-Warshall over unsquared weights.
Matrix reference_shortest_paths(const PartialDistanceGraph& g) {
    const Index n = g.n();
    const double inf = std::numeric_limits<double>::infinity();
    Matrix d = Matrix::Constant(n, n, inf);
    for (Index i = 0; i < n; ++i) d(i, i) = 0;
    for (const auto& e : g.edges()) {
        d(e.i, e.j) = std::min(d(e.i, e.j), e.weight);
        d(e.j, e.i) = d(e.i, e.j);
    }
    for (Index k = 0; k < n; ++k)
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j) d(i, j) = std::min(d(i, j), d(i, k) + d(k, j));
    return d;
}

Matrix projector(const Matrix& basis) { return basis * basis.transpose(); }

} // namespace

TEST_CASE("jaccard dissimilarity") {
    // Row sums: vertex 0 has 2 + 2 = 4, vertex 1 has 2 + 1 = 3.
    const InteractionCounts counts(4, {{0, 1, 2}, {0, 2, 2}, {1, 3, 1}});
    const PartialDistanceGraph g = jaccard_dissimilarity(counts);
    CHECK(g.edges().size() == 3);
    const auto& e = g.edges()[0];
    CHECK(e.i == 0);
    CHECK(e.j == 1);
    CHECK(e.weight == doctest::Approx(std::sqrt(0.6)));
    CHECK(e.weight == doctest::Approx(0.7745967).epsilon(1e-7));

    const InteractionCounts pair_only(3, {{0, 1, 5}, {0, 2, 0}});
    const PartialDistanceGraph iso = jaccard_dissimilarity(pair_only);
    REQUIRE(iso.edges().size() == 1);
    CHECK(iso.edges()[0].weight == 0.0);

    Rng rng(2);
    std::vector<InteractionCounts::Entry> entries;
    for (Index i = 0; i < 15; ++i)
        for (Index j = i + 1; j < 15; ++j)
            if (rng.uniform() < 0.4) entries.push_back({i, j, static_cast<std::int64_t>(rng.below(9))});
    const InteractionCounts random(15, entries);
    for (const auto& edge : jaccard_dissimilarity(random).edges()) {
        CHECK(edge.weight >= 0.0);
        CHECK(edge.weight <= 1.0);
    }
    std::size_t nonzero = 0;
    for (const auto& en : entries) nonzero += en.count != 0;
    CHECK(jaccard_dissimilarity(random).edges().size() == nonzero);

    CHECK_THROWS_AS(InteractionCounts(3, {{0, 1, -1}}), InvalidArgument);
    CHECK_THROWS_AS(InteractionCounts(3, {{0, 1, 1}, {1, 0, 2}}), InvalidArgument);
    CHECK_THROWS_AS(InteractionCounts(3, {{1, 1, 1}}), InvalidArgument);
}

TEST_CASE("shortest_path_complete") {
    const PartialDistanceGraph path(3, {{0, 1, 1.0}, {1, 2, 1.0}});
    CHECK(shortest_path_complete(path)(0, 2) == doctest::Approx(4.0));
    const PartialDistanceGraph tri(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 10.0}});
    const SymmetricMatrix sp = shortest_path_complete(tri);
    CHECK(sp(0, 2) == doctest::Approx(4.0));
    CHECK(sp(0, 1) == doctest::Approx(1.0));
    CHECK(sp(0, 0) == 0.0);

    const PartialDistanceGraph split(4, {{0, 1, 1.0}, {2, 3, 1.0}});
    CHECK_THROWS_AS(shortest_path_complete(split), DisconnectedGraph);
    try {
        shortest_path_complete(split);
    } catch (const DisconnectedGraph& e) {
        const bool crosses = (e.first() < 2) != (e.second() < 2);
        CHECK(crosses);
    }

    Rng rng(3);
    for (int trial = 0; trial < 5; ++trial) {
        const Index n = 25;
        std::vector<PartialDistanceGraph::Edge> edges;
        for (Index i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 0.1 + rng.uniform()});
        for (int extra = 0; extra < 40; ++extra) {
            const Index a = static_cast<Index>(rng.below(n));
            const Index b = static_cast<Index>(rng.below(n));
            if (a != b) edges.push_back({std::min(a, b), std::max(a, b), 0.1 + 3 * rng.uniform()});
        }
        const PartialDistanceGraph g(n, edges);
        const Matrix ref = reference_shortest_paths(g);
        const Matrix got = shortest_path_complete(g).matrix().cwiseSqrt();
        CHECK((got - ref).cwiseAbs().maxCoeff() < 1e-12);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j)
                for (Index k = 0; k < n; ++k) CHECK(got(i, j) <= got(i, k) + got(k, j) + 1e-10);
    }
}

TEST_CASE("strip_isolated") {
    const PartialDistanceGraph g(5, {{1, 3, 2.0}, {3, 4, 1.0}});
    const auto c = strip_isolated(g);
    CHECK(c.graph.n() == 3);
    CHECK(c.original_index == std::vector<Index>{1, 3, 4});
    CHECK(c.graph.edges()[0].i == 0);
    CHECK(c.graph.edges()[0].j == 1);
    CHECK(c.graph.edges()[1].i == 1);
    CHECK(c.graph.edges()[1].j == 2);

    const InteractionCounts counts(4, {{0, 2, 3}, {2, 3, 0}});
    const auto cc = strip_isolated(counts);
    CHECK(cc.graph.n() == 2);
    CHECK(cc.original_index == std::vector<Index>{0, 2});
}

TEST_CASE("observation graph conversion") {
    const ObservationSet obs(3, {{0, 1}, {0, 1}, {1, 2}}, Vector{{1.0, 3.0, 2.0}}, 0.1);
    const PartialDistanceGraph g = graph_from_observations(obs);
    REQUIRE(g.edges().size() == 2);
    CHECK(g.edges()[0].weight == doctest::Approx(2.0));
    const ObservationSet back = observations_from_graph(g, 0.0);
    CHECK(back.m() == 2);
    CHECK(back.values()(1) == 2.0);
}

TEST_CASE("initial_subspace") {
    Rng rng(4);
    const Index n = 20;
    const Matrix pts = testing::random_matrix(n, 2, rng);
    const SymmetricMatrix d = squared_distances(pts);
    const SubspaceEstimate exact = initial_subspace(d, 2);
    CHECK((exact.basis.transpose() * exact.basis - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <
          1e-10);
    // The true subspace is the column space of the centered points.
    const Matrix centered = centering_matrix(n) * pts;
    Eigen::HouseholderQR<Matrix> qr(centered);
    const Matrix q = qr.householderQ() * Matrix::Identity(n, 2);
    CHECK((projector(exact.basis) - projector(q)).norm() <= 1e-6);
    CHECK(exact.gap > 0);
    CHECK(exact.eigenvalues.size() == n);

    // A small symmetric hollow perturbation moves the subspace proportionally.
    const Matrix h_raw = testing::random_hollow(n, rng);
    const double lambda_r = exact.eigenvalues(1);
    const Matrix h = h_raw * (1e-4 * lambda_r / h_raw.norm());
    const SubspaceEstimate moved = initial_subspace(SymmetricMatrix(d.matrix() + h), 2);
    const double dist = (projector(moved.basis) - projector(exact.basis)).norm();
    CHECK(dist > 0);
    CHECK(dist < 1e-4 * 4 * std::sqrt(2.0));

    const SymmetricMatrix generic(testing::random_hollow(6, rng));
    const SubspaceEstimate full = initial_subspace(generic, 5);
    const Spectrum s = spectral_decomposition(SymmetricMatrix::symmetrize(
        -testing::reference_double_center(generic.matrix())));
    const Vector p = s.eigenvectors.col(5);
    CHECK((projector(full.basis) - (Matrix::Identity(6, 6) - p * p.transpose())).norm() < 1e-10);

    CHECK_THROWS_AS(initial_subspace(d, n), InvalidArgument);
    CHECK_THROWS_AS(initial_subspace(d, 0), InvalidArgument);
}

TEST_CASE("graph file readers") {
    std::istringstream counts_text("# comment\n0 1 3\n\n1 4 2\n");
    const InteractionCounts c = read_interaction_counts(counts_text);
    CHECK(c.n() == 5);
    CHECK(c.entries().size() == 2);
    std::istringstream hinted("0 1 3\n");
    CHECK(read_interaction_counts(hinted, 9).n() == 9);
    std::istringstream fractional("0 1 1.5\n");
    CHECK_THROWS_AS(read_interaction_counts(fractional), IoError);
    std::istringstream negative("0 1 -2\n");
    CHECK_THROWS_AS(read_interaction_counts(negative), IoError);

    std::istringstream dist_text("0 1 0.5\n1 2 1.25\n");
    const PartialDistanceGraph g = read_distance_graph(dist_text);
    CHECK(g.n() == 3);
    CHECK(g.edges()[1].weight == 1.25);
    std::istringstream zero("0 1 0\n");
    CHECK_THROWS_AS(read_distance_graph(zero), IoError);
    std::istringstream garbage("0 1\n");
    CHECK_THROWS_AS(read_distance_graph(garbage), IoError);
    std::istringstream loop("2 2 1.0\n");
    CHECK_THROWS_AS(read_distance_graph(loop), IoError);
}
