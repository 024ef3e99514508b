//
// Copyright 2026 The edmc Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include "edmc/linalg.hpp"

namespace edmc {

/// Seedable generator with a platform-independent output sequence.
///
/// The engine is std::mt19937_64, whose sequence the standard pins down; the
/// standard distributions are not portable, so the variates are derived here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound);
    /// Standard normal (Marsaglia polar method).
    double normal();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

struct IndexPair {
    Index i = 0;
    Index j = 0;

    friend bool operator==(const IndexPair&, const IndexPair&) = default;
    friend auto operator<=>(const IndexPair&, const IndexPair&) = default;
};

/// Orders (a, b) so that i < j; throws on a == b or negative index.
IndexPair make_pair_checked(Index a, Index b, Index n);

enum class NoiseKind { gaussian, rademacher, uniform };

/// Zero-mean, unit-variance noise family plus the seed of its stream.
struct NoiseSpec {
    NoiseKind kind = NoiseKind::gaussian;
    std::uint64_t seed = 0;
};

NoiseKind parse_noise_kind(const std::string& name);
const char* to_string(NoiseKind kind);

/// Sampled index pairs with their observed (unsquared) distances.
class ObservationSet {
public:
    ObservationSet(Index n, std::vector<IndexPair> pairs, Vector values, double noise_scale,
                   std::uint64_t seed = 0);

    Index n() const noexcept { return n_; }
    Index m() const noexcept { return static_cast<Index>(pairs_.size()); }
    const std::vector<IndexPair>& pairs() const noexcept { return pairs_; }
    const Vector& values() const noexcept { return values_; }
    double noise_scale() const noexcept { return noise_scale_; }
    std::uint64_t seed() const noexcept { return seed_; }

private:
    Index n_;
    std::vector<IndexPair> pairs_;
    Vector values_;
    double noise_scale_;
    std::uint64_t seed_;
};

/// m i.i.d. draws, with replacement, uniform over the n(n-1)/2 pairs.
std::vector<IndexPair> sample_uniform(Index n, Index m, std::uint64_t seed);

/// (i, j) is kept when d_ij is among the k smallest of row i or of row j.
/// Ties within a row go to the smaller column index. Sorted, no duplicates.
std::vector<IndexPair> sample_knn(const SymmetricMatrix& d, Index k);

/// Every pair within distance `radius`, i.e. with squared distance
/// d_ij <= radius^2. Sorted.
std::vector<IndexPair> sample_unit_ball(const SymmetricMatrix& d, double radius);

/// m draws of the given noise family.
Vector draw_noise(const NoiseSpec& spec, Index m);

/// y_l = sqrt(D_true at pair l) + eta * xi_l, clamped at zero.
ObservationSet observe(const std::vector<IndexPair>& pairs, const SymmetricMatrix& d_true,
                       double eta, const NoiseSpec& noise);

/// Same as `observe`, with the noise realization supplied by the caller.
ObservationSet observe_with_noise(const std::vector<IndexPair>& pairs,
                                  const SymmetricMatrix& d_true, double eta, const Vector& xi);

/// O(A)_l = <X_l, A> = A(i_l, j_l).
Vector apply_O(const ObservationSet& obs, const SymmetricMatrix& a);
/// O*(z) = sum_l z_l X_l with X_l = (e_i e_j^T + e_j e_i^T) / 2.
SymmetricMatrix apply_O_adjoint(const ObservationSet& obs, const Vector& z);

/// zeta = 2 O(D^(1/2)) o xi + eta (xi o xi).
Vector zeta_vector(const ObservationSet& obs, const SymmetricMatrix& d_true, const Vector& xi);

/// Spectral norm of O*(zeta) / m.
double zeta_operator_norm(const ObservationSet& obs, const Vector& zeta);

/// Triplet text format: "n m eta" then m lines "i j y", 17 significant digits.
void write_observations(std::ostream& out, const ObservationSet& obs);
ObservationSet read_observations(std::istream& in);

namespace detail {
void apply_O(const std::vector<IndexPair>& pairs, const Matrix& a, Vector& out);
void apply_O_adjoint(const std::vector<IndexPair>& pairs, const Vector& z, Matrix& out);
} // namespace detail

} // namespace edmc
