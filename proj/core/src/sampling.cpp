//
// Copyright 2026 The edmc Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "edmc/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "edmc/errors.hpp"
#include "edmc/io.hpp"

namespace edmc {

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) {
        throw InvalidArgument("Rng::below requires a positive bound");
    }
    // Rejection on the top of the range keeps the draw exactly uniform.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % bound;
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * factor;
    has_spare_ = true;
    return u * factor;
}

IndexPair make_pair_checked(Index a, Index b, Index n) {
    if (a < 0 || b < 0 || a >= n || b >= n) {
        throw InvalidArgument("pair (" + std::to_string(a) + ", " + std::to_string(b) +
                              ") out of range for n = " + std::to_string(n));
    }
    if (a == b) {
        throw InvalidArgument("diagonal pair (" + std::to_string(a) + ", " + std::to_string(b) +
                              ") is not an off-diagonal observation");
    }
    return a < b ? IndexPair{a, b} : IndexPair{b, a};
}

NoiseKind parse_noise_kind(const std::string& name) {
    if (name == "gaussian") return NoiseKind::gaussian;
    if (name == "rademacher") return NoiseKind::rademacher;
    if (name == "uniform") return NoiseKind::uniform;
    throw InvalidArgument("unknown noise kind '" + name + "'");
}

const char* to_string(NoiseKind kind) {
    switch (kind) {
    case NoiseKind::gaussian: return "gaussian";
    case NoiseKind::rademacher: return "rademacher";
    case NoiseKind::uniform: return "uniform";
    }
    return "unknown";
}

ObservationSet::ObservationSet(Index n, std::vector<IndexPair> pairs, Vector values,
                               double noise_scale, std::uint64_t seed)
    : n_(n), pairs_(std::move(pairs)), values_(std::move(values)), noise_scale_(noise_scale),
      seed_(seed) {
    if (n_ < 2) {
        throw InvalidArgument("observation set needs n >= 2");
    }
    if (static_cast<Index>(pairs_.size()) != values_.size()) {
        throw InvalidArgument("observation set has " + std::to_string(pairs_.size()) +
                              " pairs but " + std::to_string(values_.size()) + " values");
    }
    if (!(noise_scale_ >= 0.0)) {
        throw InvalidArgument("noise scale must be nonnegative");
    }
    for (const auto& p : pairs_) {
        if (!(0 <= p.i && p.i < p.j && p.j < n_)) {
            throw InvalidArgument("invalid index pair (" + std::to_string(p.i) + ", " +
                                  std::to_string(p.j) + ")");
        }
    }
    for (Index l = 0; l < values_.size(); ++l) {
        if (!std::isfinite(values_(l)) || values_(l) < 0.0) {
            throw InvalidArgument("observed distance " + std::to_string(l) +
                                  " is negative or non-finite");
        }
    }
}

std::vector<IndexPair> sample_uniform(Index n, Index m, std::uint64_t seed) {
    if (n < 2 || m < 1) {
        throw InvalidArgument("sample_uniform needs n >= 2 and m >= 1");
    }
    Rng rng(seed);
    const auto total = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n - 1) / 2;
    std::vector<IndexPair> pairs;
    pairs.reserve(static_cast<std::size_t>(m));
    for (Index l = 0; l < m; ++l) {
        // Unrank a linear index over the strict upper triangle, row by row.
        auto r = rng.below(total);
        Index i = 0;
        auto row_len = static_cast<std::uint64_t>(n - 1);
        while (r >= row_len) {
            r -= row_len;
            ++i;
            --row_len;
        }
        pairs.push_back({i, i + 1 + static_cast<Index>(r)});
    }
    return pairs;
}

std::vector<IndexPair> sample_knn(const SymmetricMatrix& d, Index k) {
    const Index n = d.size();
    if (k < 1 || k >= n) {
        throw InvalidArgument("k-NN sampling needs 1 <= k < n");
    }
    std::vector<IndexPair> pairs;
    std::vector<Index> order(static_cast<std::size_t>(n - 1));
    for (Index i = 0; i < n; ++i) {
        order.clear();
        for (Index j = 0; j < n; ++j) {
            if (j != i) order.push_back(j);
        }
        std::stable_sort(order.begin(), order.end(),
                         [&](Index a, Index b) { return d(i, a) < d(i, b); });
        for (Index t = 0; t < k; ++t) {
            pairs.push_back(make_pair_checked(i, order[static_cast<std::size_t>(t)], n));
        }
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    return pairs;
}

std::vector<IndexPair> sample_unit_ball(const SymmetricMatrix& d, double radius) {
    if (!(radius > 0.0)) {
        throw InvalidArgument("unit-ball sampling needs a positive radius");
    }
    const double limit = radius * radius;
    std::vector<IndexPair> pairs;
    for (Index i = 0; i < d.size(); ++i) {
        for (Index j = i + 1; j < d.size(); ++j) {
            if (d(i, j) <= limit) pairs.push_back({i, j});
        }
    }
    return pairs;
}

Vector draw_noise(const NoiseSpec& spec, Index m) {
    Rng rng(spec.seed);
    Vector xi(m);
    const double half_width = std::sqrt(3.0);
    for (Index l = 0; l < m; ++l) {
        switch (spec.kind) {
        case NoiseKind::gaussian: xi(l) = rng.normal(); break;
        case NoiseKind::rademacher: xi(l) = (rng.next() >> 63) != 0 ? 1.0 : -1.0; break;
        case NoiseKind::uniform: xi(l) = half_width * (2.0 * rng.uniform() - 1.0); break;
        }
    }
    return xi;
}

ObservationSet observe_with_noise(const std::vector<IndexPair>& pairs,
                                  const SymmetricMatrix& d_true, double eta, const Vector& xi) {
    if (static_cast<Index>(pairs.size()) != xi.size()) {
        throw InvalidArgument("noise vector length does not match the number of pairs");
    }
    if (!(eta >= 0.0)) {
        throw InvalidArgument("noise scale must be nonnegative");
    }
    Vector y(xi.size());
    for (Index l = 0; l < xi.size(); ++l) {
        const auto& p = pairs[static_cast<std::size_t>(l)];
        if (p.j >= d_true.size()) {
            throw InvalidArgument("pair index exceeds matrix order");
        }
        const double dist2 = d_true(p.i, p.j);
        if (dist2 < 0.0) {
            throw InvalidArgument("true squared distance is negative");
        }
        y(l) = std::max(0.0, std::sqrt(dist2) + eta * xi(l));
    }
    return ObservationSet(d_true.size(), pairs, std::move(y), eta);
}

ObservationSet observe(const std::vector<IndexPair>& pairs, const SymmetricMatrix& d_true,
                       double eta, const NoiseSpec& noise) {
    const Vector xi = draw_noise(noise, static_cast<Index>(pairs.size()));
    ObservationSet base = observe_with_noise(pairs, d_true, eta, xi);
    return ObservationSet(base.n(), base.pairs(), base.values(), eta, noise.seed);
}

namespace detail {

void apply_O(const std::vector<IndexPair>& pairs, const Matrix& a, Vector& out) {
    out.resize(static_cast<Index>(pairs.size()));
    for (std::size_t l = 0; l < pairs.size(); ++l) {
        out(static_cast<Index>(l)) = a(pairs[l].i, pairs[l].j);
    }
}

void apply_O_adjoint(const std::vector<IndexPair>& pairs, const Vector& z, Matrix& out) {
    for (std::size_t l = 0; l < pairs.size(); ++l) {
        const double half = 0.5 * z(static_cast<Index>(l));
        out(pairs[l].i, pairs[l].j) += half;
        out(pairs[l].j, pairs[l].i) += half;
    }
}

} // namespace detail

Vector apply_O(const ObservationSet& obs, const SymmetricMatrix& a) {
    if (a.size() != obs.n()) {
        throw InvalidArgument("matrix order does not match the observation set");
    }
    Vector out;
    detail::apply_O(obs.pairs(), a.matrix(), out);
    return out;
}

SymmetricMatrix apply_O_adjoint(const ObservationSet& obs, const Vector& z) {
    if (z.size() != obs.m()) {
        throw InvalidArgument("vector length does not match the number of observations");
    }
    Matrix out = Matrix::Zero(obs.n(), obs.n());
    detail::apply_O_adjoint(obs.pairs(), z, out);
    return SymmetricMatrix(std::move(out));
}

Vector zeta_vector(const ObservationSet& obs, const SymmetricMatrix& d_true, const Vector& xi) {
    if (xi.size() != obs.m()) {
        throw InvalidArgument("noise vector length does not match the number of observations");
    }
    Vector zeta(obs.m());
    for (Index l = 0; l < obs.m(); ++l) {
        const auto& p = obs.pairs()[static_cast<std::size_t>(l)];
        const double dist = std::sqrt(d_true(p.i, p.j));
        zeta(l) = 2.0 * dist * xi(l) + obs.noise_scale() * xi(l) * xi(l);
    }
    return zeta;
}

double zeta_operator_norm(const ObservationSet& obs, const Vector& zeta) {
    const Matrix scattered = apply_O_adjoint(obs, zeta).matrix() / static_cast<double>(obs.m());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(scattered, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

void write_observations(std::ostream& out, const ObservationSet& obs) {
    out << obs.n() << ' ' << obs.m() << ' ' << format_double(obs.noise_scale()) << '\n';
    for (Index l = 0; l < obs.m(); ++l) {
        const auto& p = obs.pairs()[static_cast<std::size_t>(l)];
        out << p.i << ' ' << p.j << ' ' << format_double(obs.values()(l)) << '\n';
    }
    if (!out) {
        throw IoError("failed writing observation file");
    }
}

ObservationSet read_observations(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw IoError("observation file is empty");
    }
    std::istringstream header(line);
    long long n = 0, m = 0;
    std::string eta_text;
    if (!(header >> n >> m >> eta_text) || n < 2 || m < 0) {
        throw IoError("malformed observation header: '" + line + "'");
    }
    const double eta = parse_double(eta_text);
    std::vector<IndexPair> pairs;
    pairs.reserve(static_cast<std::size_t>(m));
    Vector y(m);
    for (long long l = 0; l < m; ++l) {
        if (!std::getline(in, line)) {
            throw IoError("observation file ends after " + std::to_string(l) + " of " +
                          std::to_string(m) + " triplets");
        }
        std::istringstream row(line);
        long long i = 0, j = 0;
        std::string value;
        if (!(row >> i >> j >> value)) {
            throw IoError("malformed observation line: '" + line + "'");
        }
        try {
            pairs.push_back(make_pair_checked(i, j, n));
        } catch (const InvalidArgument& e) {
            throw IoError(e.what());
        }
        y(l) = parse_double(value);
    }
    try {
        return ObservationSet(n, std::move(pairs), std::move(y), eta);
    } catch (const InvalidArgument& e) {
        throw IoError(std::string("invalid observation file: ") + e.what());
    }
}

} // namespace edmc
