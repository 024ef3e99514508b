//
// Copyright 2026 The edmc Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "edmc/linalg.hpp"

namespace edmc {

/// Shortest-form-independent rendering with 17 significant digits, which
/// round-trips every finite double through parse_double.
std::string format_double(double value);

/// Strict decimal parse of the whole token; throws IoError otherwise.
double parse_double(std::string_view text);

/// Dense matrix CSV: a header line "n=<dim>" then n comma-separated rows.
void write_matrix_csv(std::ostream& out, const SymmetricMatrix& a);
SymmetricMatrix read_matrix_csv(std::istream& in);

/// Coordinates CSV: header "x0,x1,...", then one row per point.
void write_coordinates_csv(std::ostream& out, const Matrix& points);
Matrix read_coordinates_csv(std::istream& in);

/// Spectrum CSV: header "index,eigenvalue,edm_score", one row per eigenvalue.
void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum);

// File-path conveniences that raise IoError naming the path.
std::ofstream open_for_write(const std::filesystem::path& path);
std::ifstream open_for_read(const std::filesystem::path& path);

} // namespace edmc
