//
// Copyright 2026 The edmc Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "edmc/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "edmc/errors.hpp"

namespace edmc {

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

} // namespace

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || text.empty()) {
        throw IoError("cannot parse number '" + std::string(text) + "'");
    }
    return value;
}

void write_matrix_csv(std::ostream& out, const SymmetricMatrix& a) {
    const Index n = a.size();
    out << "n=" << n << '\n';
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            if (j > 0) out << ',';
            out << format_double(a(i, j));
        }
        out << '\n';
    }
    if (!out) throw IoError("failed writing matrix file");
}

SymmetricMatrix read_matrix_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw IoError("matrix file is empty");
    const auto header = trim(line);
    if (header.substr(0, 2) != "n=") {
        throw IoError("matrix file header must read n=<dim>, got '" + line + "'");
    }
    const double dim = parse_double(header.substr(2));
    const auto n = static_cast<Index>(dim);
    if (static_cast<double>(n) != dim || n < 2) {
        throw IoError("invalid matrix dimension in header '" + line + "'");
    }
    Matrix a(n, n);
    for (Index i = 0; i < n; ++i) {
        if (!std::getline(in, line)) {
            throw IoError("matrix file ends after " + std::to_string(i) + " of " +
                          std::to_string(n) + " rows");
        }
        const auto fields = split_commas(trim(line));
        if (static_cast<Index>(fields.size()) != n) {
            throw IoError("matrix row " + std::to_string(i) + " has " +
                          std::to_string(fields.size()) + " entries, expected " +
                          std::to_string(n));
        }
        for (Index j = 0; j < n; ++j) a(i, j) = parse_double(fields[static_cast<std::size_t>(j)]);
    }
    try {
        return SymmetricMatrix(std::move(a));
    } catch (const InvalidArgument& e) {
        throw InvalidArgument(std::string("matrix file rejected: ") + e.what());
    }
}

void write_coordinates_csv(std::ostream& out, const Matrix& points) {
    for (Index c = 0; c < points.cols(); ++c) {
        if (c > 0) out << ',';
        out << 'x' << c;
    }
    out << '\n';
    for (Index r = 0; r < points.rows(); ++r) {
        for (Index c = 0; c < points.cols(); ++c) {
            if (c > 0) out << ',';
            out << format_double(points(r, c));
        }
        out << '\n';
    }
    if (!out) throw IoError("failed writing coordinates file");
}

Matrix read_coordinates_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw IoError("coordinates file is empty");
    const auto cols = static_cast<Index>(split_commas(trim(line)).size());
    std::vector<double> values;
    Index rows = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const auto fields = split_commas(trim(line));
        if (static_cast<Index>(fields.size()) != cols) {
            throw IoError("coordinates row " + std::to_string(rows) + " has " +
                          std::to_string(fields.size()) + " entries, expected " +
                          std::to_string(cols));
        }
        for (const auto f : fields) values.push_back(parse_double(f));
        ++rows;
    }
    Matrix points(rows, cols);
    for (Index r = 0; r < rows; ++r)
        for (Index c = 0; c < cols; ++c)
            points(r, c) = values[static_cast<std::size_t>(r * cols + c)];
    return points;
}

void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum) {
    const auto scores = edm_scores(spectrum);
    out << "index,eigenvalue,edm_score\n";
    for (Index i = 0; i < spectrum.size(); ++i) {
        out << i + 1 << ',' << format_double(spectrum.eigenvalues(i)) << ',';
        if (!scores.empty()) out << format_double(scores[static_cast<std::size_t>(i)]);
        out << '\n';
    }
    if (!out) throw IoError("failed writing spectrum file");
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

std::ifstream open_for_read(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    return in;
}

} // namespace edmc
