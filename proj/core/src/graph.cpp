//
// Copyright 2026 The edmc Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "edmc/graph.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <queue>
#include <sstream>
#include <string>

#include "edmc/errors.hpp"
#include "edmc/io.hpp"

namespace edmc {

namespace {

void check_endpoints(Index i, Index j, Index n) {
    if (i < 0 || j < 0 || i >= n || j >= n) {
        throw InvalidArgument("edge (" + std::to_string(i) + ", " + std::to_string(j) +
                              ") out of range for n = " + std::to_string(n));
    }
    if (i == j) {
        throw InvalidArgument("self-loop at vertex " + std::to_string(i));
    }
}

struct TextTriplet {
    Index i;
    Index j;
    std::string value;
};

std::vector<TextTriplet> read_triplets(std::istream& in) {
    std::vector<TextTriplet> rows;
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream s(line);
        long long i = 0, j = 0;
        std::string value;
        if (!(s >> i >> j >> value)) {
            throw IoError("malformed edge line: '" + line + "'");
        }
        rows.push_back({static_cast<Index>(i), static_cast<Index>(j), value});
    }
    return rows;
}

Index infer_n(const std::vector<TextTriplet>& rows, Index n_hint) {
    Index n = n_hint;
    for (const auto& r : rows) {
        if (r.i < 0 || r.j < 0) throw IoError("negative vertex index in edge file");
        n = std::max({n, r.i + 1, r.j + 1});
    }
    return n;
}

std::vector<Index> compaction_map(Index n, const std::vector<bool>& used,
                                  std::vector<Index>& original) {
    std::vector<Index> remap(static_cast<std::size_t>(n), -1);
    for (Index v = 0; v < n; ++v) {
        if (used[static_cast<std::size_t>(v)]) {
            remap[static_cast<std::size_t>(v)] = static_cast<Index>(original.size());
            original.push_back(v);
        }
    }
    return remap;
}

} // namespace

InteractionCounts::InteractionCounts(Index n, std::vector<Entry> entries)
    : n_(n), entries_(std::move(entries)) {
    if (n_ < 2) throw InvalidArgument("interaction counts need n >= 2");
    std::map<std::pair<Index, Index>, bool> seen;
    for (auto& e : entries_) {
        check_endpoints(e.i, e.j, n_);
        if (e.i > e.j) std::swap(e.i, e.j);
        if (e.count < 0) {
            throw InvalidArgument("negative interaction count between " + std::to_string(e.i) +
                                  " and " + std::to_string(e.j));
        }
        if (!seen.emplace(std::pair{e.i, e.j}, true).second) {
            throw InvalidArgument("pair (" + std::to_string(e.i) + ", " + std::to_string(e.j) +
                                  ") listed twice in interaction counts");
        }
    }
}

std::vector<std::int64_t> InteractionCounts::row_sums() const {
    std::vector<std::int64_t> sums(static_cast<std::size_t>(n_), 0);
    for (const auto& e : entries_) {
        sums[static_cast<std::size_t>(e.i)] += e.count;
        sums[static_cast<std::size_t>(e.j)] += e.count;
    }
    return sums;
}

PartialDistanceGraph::PartialDistanceGraph(Index n, std::vector<Edge> edges)
    : n_(n), edges_(std::move(edges)) {
    if (n_ < 2) throw InvalidArgument("distance graph needs n >= 2");
    for (auto& e : edges_) {
        check_endpoints(e.i, e.j, n_);
        if (e.i > e.j) std::swap(e.i, e.j);
        if (!std::isfinite(e.weight) || e.weight < 0.0) {
            throw InvalidArgument("edge (" + std::to_string(e.i) + ", " + std::to_string(e.j) +
                                  ") has a negative or non-finite weight");
        }
    }
}

PartialDistanceGraph jaccard_dissimilarity(const InteractionCounts& counts) {
    const auto sums = counts.row_sums();
    std::vector<PartialDistanceGraph::Edge> edges;
    for (const auto& e : counts.entries()) {
        if (e.count == 0) continue;
        const auto denom = sums[static_cast<std::size_t>(e.i)] +
                           sums[static_cast<std::size_t>(e.j)] - e.count;
        if (denom <= 0) {
            throw InvalidArgument("malformed counts: nonpositive Jaccard denominator at (" +
                                  std::to_string(e.i) + ", " + std::to_string(e.j) + ")");
        }
        const double ratio = static_cast<double>(e.count) / static_cast<double>(denom);
        edges.push_back({e.i, e.j, std::sqrt(std::max(0.0, 1.0 - ratio))});
    }
    return PartialDistanceGraph(counts.n(), std::move(edges));
}

SymmetricMatrix shortest_path_complete(const PartialDistanceGraph& graph) {
    const Index n = graph.n();
    std::vector<std::vector<std::pair<Index, double>>> adjacency(static_cast<std::size_t>(n));
    for (const auto& e : graph.edges()) {
        adjacency[static_cast<std::size_t>(e.i)].emplace_back(e.j, e.weight);
        adjacency[static_cast<std::size_t>(e.j)].emplace_back(e.i, e.weight);
    }

    constexpr double inf = std::numeric_limits<double>::infinity();
    Matrix dist = Matrix::Constant(n, n, inf);
    using Item = std::pair<double, Index>;
    for (Index source = 0; source < n; ++source) {
        auto row = dist.row(source);
        row(source) = 0.0;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
        heap.emplace(0.0, source);
        while (!heap.empty()) {
            const auto [d, u] = heap.top();
            heap.pop();
            if (d > row(u)) continue;
            for (const auto& [v, w] : adjacency[static_cast<std::size_t>(u)]) {
                if (d + w < row(v)) {
                    row(v) = d + w;
                    heap.emplace(d + w, v);
                }
            }
        }
        for (Index v = 0; v < n; ++v) {
            if (row(v) == inf) throw DisconnectedGraph(source, v);
        }
    }
    // Dijkstra from each end of a pair can differ in the last ulp.
    Matrix squared = dist.cwiseMin(dist.transpose()).cwiseAbs2();
    squared.diagonal().setZero();
    return SymmetricMatrix(std::move(squared));
}

Compacted<PartialDistanceGraph> strip_isolated(const PartialDistanceGraph& graph) {
    std::vector<bool> used(static_cast<std::size_t>(graph.n()), false);
    for (const auto& e : graph.edges()) {
        used[static_cast<std::size_t>(e.i)] = used[static_cast<std::size_t>(e.j)] = true;
    }
    std::vector<Index> original;
    const auto remap = compaction_map(graph.n(), used, original);
    std::vector<PartialDistanceGraph::Edge> edges;
    for (const auto& e : graph.edges()) {
        edges.push_back({remap[static_cast<std::size_t>(e.i)],
                         remap[static_cast<std::size_t>(e.j)], e.weight});
    }
    const auto n = static_cast<Index>(original.size());
    if (n < 2) throw InvalidArgument("fewer than two non-isolated vertices");
    return {PartialDistanceGraph(n, std::move(edges)), std::move(original)};
}

Compacted<InteractionCounts> strip_isolated(const InteractionCounts& counts) {
    std::vector<bool> used(static_cast<std::size_t>(counts.n()), false);
    for (const auto& e : counts.entries()) {
        if (e.count != 0) {
            used[static_cast<std::size_t>(e.i)] = used[static_cast<std::size_t>(e.j)] = true;
        }
    }
    std::vector<Index> original;
    const auto remap = compaction_map(counts.n(), used, original);
    std::vector<InteractionCounts::Entry> entries;
    for (const auto& e : counts.entries()) {
        if (e.count == 0) continue;
        entries.push_back({remap[static_cast<std::size_t>(e.i)],
                           remap[static_cast<std::size_t>(e.j)], e.count});
    }
    const auto n = static_cast<Index>(original.size());
    if (n < 2) throw InvalidArgument("fewer than two non-isolated vertices");
    return {InteractionCounts(n, std::move(entries)), std::move(original)};
}

PartialDistanceGraph graph_from_observations(const ObservationSet& obs) {
    std::map<IndexPair, std::pair<double, int>> acc;
    for (Index l = 0; l < obs.m(); ++l) {
        auto& slot = acc[obs.pairs()[static_cast<std::size_t>(l)]];
        slot.first += obs.values()(l);
        slot.second += 1;
    }
    std::vector<PartialDistanceGraph::Edge> edges;
    edges.reserve(acc.size());
    for (const auto& [pair, sum] : acc) {
        edges.push_back({pair.i, pair.j, sum.first / sum.second});
    }
    return PartialDistanceGraph(obs.n(), std::move(edges));
}

ObservationSet observations_from_graph(const PartialDistanceGraph& graph, double noise_scale) {
    std::vector<IndexPair> pairs;
    Vector y(static_cast<Index>(graph.edges().size()));
    for (std::size_t l = 0; l < graph.edges().size(); ++l) {
        const auto& e = graph.edges()[l];
        pairs.push_back({e.i, e.j});
        y(static_cast<Index>(l)) = e.weight;
    }
    return ObservationSet(graph.n(), std::move(pairs), std::move(y), noise_scale);
}

SubspaceEstimate initial_subspace(const SymmetricMatrix& d, Index r) {
    if (r < 1 || r >= d.size()) {
        throw InvalidArgument("subspace rank " + std::to_string(r) + " outside [1, n)");
    }
    const Spectrum s =
        spectral_decomposition(SymmetricMatrix::symmetrize(-detail::double_center(d.matrix())));
    SubspaceEstimate out;
    out.basis = s.leading(r);
    out.eigenvalues = s.eigenvalues;
    out.gap = s.eigenvalues(r - 1) - s.eigenvalues(r);
    return out;
}

InteractionCounts read_interaction_counts(std::istream& in, Index n_hint) {
    const auto rows = read_triplets(in);
    std::vector<InteractionCounts::Entry> entries;
    for (const auto& r : rows) {
        const double c = parse_double(r.value);
        if (c != std::floor(c) || c <= 0.0) {
            throw IoError("interaction count must be a positive integer, got '" + r.value + "'");
        }
        entries.push_back({r.i, r.j, static_cast<std::int64_t>(c)});
    }
    try {
        return InteractionCounts(infer_n(rows, n_hint), std::move(entries));
    } catch (const InvalidArgument& e) {
        throw IoError(std::string("invalid counts file: ") + e.what());
    }
}

PartialDistanceGraph read_distance_graph(std::istream& in, Index n_hint) {
    const auto rows = read_triplets(in);
    std::vector<PartialDistanceGraph::Edge> edges;
    for (const auto& r : rows) {
        const double d = parse_double(r.value);
        if (!(d > 0.0)) throw IoError("edge distance must be positive, got '" + r.value + "'");
        edges.push_back({r.i, r.j, d});
    }
    try {
        return PartialDistanceGraph(infer_n(rows, n_hint), std::move(edges));
    } catch (const InvalidArgument& e) {
        throw IoError(std::string("invalid distance-graph file: ") + e.what());
    }
}

} // namespace edmc
