//
// Copyright 2026 The edmc Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "edmc/linalg.hpp"
#include "edmc/sampling.hpp"

namespace edmc {

/// Undirected interaction counts, each pair stored once with i < j.
class InteractionCounts {
public:
    struct Entry {
        Index i;
        Index j;
        std::int64_t count;
    };

    InteractionCounts(Index n, std::vector<Entry> entries);

    Index n() const noexcept { return n_; }
    const std::vector<Entry>& entries() const noexcept { return entries_; }
    /// sum_k C_ik for every i.
    std::vector<std::int64_t> row_sums() const;

private:
    Index n_;
    std::vector<Entry> entries_;
};

/// Weighted undirected graph on n vertices, no self-loops, weights >= 0.
class PartialDistanceGraph {
public:
    struct Edge {
        Index i;
        Index j;
        double weight;
    };

    PartialDistanceGraph(Index n, std::vector<Edge> edges);

    Index n() const noexcept { return n_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }

private:
    Index n_;
    std::vector<Edge> edges_;
};

/// Result of dropping vertices that have no incident edge.
template <class Graph>
struct Compacted {
    Graph graph;
    std::vector<Index> original_index;  // new vertex -> old vertex
};

/// Jaccard distance sqrt(1 - C_ij / (sum_k C_ik + sum_k C_jk - C_ij)) for
/// every pair with C_ij != 0; other pairs are absent.
PartialDistanceGraph jaccard_dissimilarity(const InteractionCounts& counts);

/// Squared all-pairs shortest-path lengths. Throws DisconnectedGraph.
SymmetricMatrix shortest_path_complete(const PartialDistanceGraph& graph);

Compacted<PartialDistanceGraph> strip_isolated(const PartialDistanceGraph& graph);
Compacted<InteractionCounts> strip_isolated(const InteractionCounts& counts);

/// One edge per distinct observed pair, weighted by the mean observed value.
PartialDistanceGraph graph_from_observations(const ObservationSet& obs);

/// Treats every edge of the graph as one noise-free-looking observation.
ObservationSet observations_from_graph(const PartialDistanceGraph& graph, double noise_scale);

struct SubspaceEstimate {
    Matrix basis;        // n x r, orthonormal columns
    Vector eigenvalues;  // full spectrum of -J D J, nonincreasing
    double gap = 0.0;    // lambda_r - lambda_{r+1}
};

/// Leading r eigenvectors of -J D J.
SubspaceEstimate initial_subspace(const SymmetricMatrix& d, Index r);

/// Text formats: lines "i j c" (positive integer count) or "i j d" (distance).
/// Blank lines and lines starting with '#' are skipped. n is one more than the
/// largest index seen unless `n_hint` is larger.
InteractionCounts read_interaction_counts(std::istream& in, Index n_hint = 0);
PartialDistanceGraph read_distance_graph(std::istream& in, Index n_hint = 0);

} // namespace edmc
