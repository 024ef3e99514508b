//
// Copyright 2026 The edmc Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <doctest.h>

#include "edmc/errors.hpp"
#include "edmc/io.hpp"
#include "test_support.hpp"

using namespace edmc;

TEST_CASE("format_double round trips") {
    Rng rng(1);
    for (int i = 0; i < 10000; ++i) {
        double v;
        const std::uint64_t bits = rng.next();
        std::memcpy(&v, &bits, sizeof v);
        if (!std::isfinite(v)) continue;
        CHECK(parse_double(format_double(v)) == v);
    }
    for (double v : {0.0, -0.0, 1.0, 0.1, 1e-300, 5e-324, std::numeric_limits<double>::max()})
        CHECK(parse_double(format_double(v)) == v);
    CHECK(parse_double("+2.5") == 2.5);
    CHECK_THROWS_AS(parse_double(""), IoError);
    CHECK_THROWS_AS(parse_double("1.0x"), IoError);
    CHECK(parse_double(" 1 ") == 1.0);
    CHECK_THROWS_AS(parse_double("1 2"), IoError);
}

TEST_CASE("matrix csv round trip") {
    Rng rng(2);
    const SymmetricMatrix a(testing::random_symmetric(7, rng));
    std::stringstream first;
    write_matrix_csv(first, a);
    CHECK(first.str().rfind("n=7\n", 0) == 0);
    const SymmetricMatrix back = read_matrix_csv(first);
    CHECK(back.matrix() == a.matrix());
    std::stringstream second;
    write_matrix_csv(second, back);
    CHECK(first.str() == second.str());
}

TEST_CASE("matrix csv errors") {
    std::istringstream empty("");
    CHECK_THROWS_AS(read_matrix_csv(empty), IoError);
    std::istringstream header("size=2\n0,1\n1,0\n");
    CHECK_THROWS_AS(read_matrix_csv(header), IoError);
    std::istringstream truncated("n=2\n0,1\n");
    CHECK_THROWS_AS(read_matrix_csv(truncated), IoError);
    std::istringstream ragged("n=2\n0,1,2\n1,0\n");
    CHECK_THROWS_AS(read_matrix_csv(ragged), IoError);
    std::istringstream asymmetric("n=2\n0,1\n2,0\n");
    CHECK_THROWS_AS(read_matrix_csv(asymmetric), InvalidArgument);
}

TEST_CASE("coordinates csv round trip") {
    Rng rng(3);
    const Matrix pts = testing::random_matrix(9, 3, rng);
    std::stringstream first;
    write_coordinates_csv(first, pts);
    CHECK(first.str().rfind("x0,x1,x2\n", 0) == 0);
    const Matrix back = read_coordinates_csv(first);
    CHECK(back == pts);
    std::stringstream second;
    write_coordinates_csv(second, back);
    CHECK(first.str() == second.str());
    std::istringstream bad("x0,x1\n1,2\n3\n");
    CHECK_THROWS_AS(read_coordinates_csv(bad), IoError);
}

TEST_CASE("spectrum csv") {
    Spectrum s{Vector{{3.0, 1.0, 0.0}}, Matrix::Identity(3, 3)};
    std::ostringstream out;
    write_spectrum_csv(out, s);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "index,eigenvalue,edm_score");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 3);
}

TEST_CASE("file helpers name the path") {
    const std::filesystem::path missing = "/nonexistent-dir/edmc/missing.csv";
    try {
        open_for_read(missing);
        FAIL("expected an IoError");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find(missing.string()) != std::string::npos);
    }
    CHECK_THROWS_AS(open_for_write(missing), IoError);
}
