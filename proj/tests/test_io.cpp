/*
 * Copyright 2026 The Hafnium Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace hafnium;
using hafnium::test::random_matrix;
using hafnium::test::random_symmetric;

TEST(TextFormat, ReadsExample) {
    std::istringstream in("2\n0 0 1 0\n1 0 0 0\n");
    EXPECT_EQ(read_matrix(in, MatrixFormat::text).matrix(), (CMatrix{{0.0, 1.0}, {1.0, 0.0}}));
}

TEST(TextFormat, SkipsComments) {
    std::istringstream in("# header\n2\n# row 0\n0 0 1 -2.5\n1 -2.5 0 0\n");
    EXPECT_EQ(read_matrix(in, MatrixFormat::text)(0, 1), cplx(1.0, -2.5));
}

TEST(TextFormat, TooManyRows) {
    std::istringstream in("2\n0 0 1 0\n1 0 0 0\n1 0 0 0\n");
    try {
        read_matrix(in, MatrixFormat::text);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::DimensionMismatch);
    }
}

TEST(TextFormat, ShortRowIsDimensionMismatch) {
    std::istringstream in("2\n0 0 1\n1 0 0 0\n");
    try {
        read_matrix(in, MatrixFormat::text);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::DimensionMismatch);
    }
}

TEST(TextFormat, BadNumberReportsPosition) {
    std::istringstream in("2\n0 0 1 0\n1 0 x 0\n");
    try {
        read_matrix(in, MatrixFormat::text);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.code(), Errc::ParseError);
        EXPECT_EQ(e.line(), 3u);
        EXPECT_EQ(e.column(), 5u);
    }
}

TEST(TextFormat, RoundTripWithinUlp) {
    std::mt19937_64 rng(21);
    const auto a = random_symmetric(8, rng);
    std::stringstream buf;
    write_matrix(buf, a, MatrixFormat::text);
    const auto b = read_matrix(buf, MatrixFormat::text);
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j) {
            EXPECT_EQ(b(i, j).real(), a(i, j).real());
            EXPECT_EQ(b(i, j).imag(), a(i, j).imag());
        }
}

TEST(BinaryFormat, RoundTripBitExact) {
    std::mt19937_64 rng(22);
    const auto a = random_symmetric(8, rng);
    const auto path = (std::filesystem::temp_directory_path() / "hafnium_io_roundtrip.bin").string();
    write_matrix(a, path, MatrixFormat::binary);
    EXPECT_EQ(read_matrix(path), a);
    std::filesystem::remove(path);
}

TEST(BinaryFormat, Layout) {
    std::stringstream buf;
    write_matrix(buf, CMatrix{{cplx(0.0), cplx(1.0, 2.0)}, {cplx(1.0, 2.0), cplx(0.0)}}, MatrixFormat::binary);
    const std::string bytes = buf.str();
    ASSERT_EQ(bytes.size(), 5u + 8u + 4u * 16u);
    EXPECT_EQ(bytes.substr(0, 5), "HAFM1");
    EXPECT_EQ(static_cast<unsigned char>(bytes[5]), 2u);
    for (int i = 6; i < 13; ++i) EXPECT_EQ(bytes[static_cast<std::size_t>(i)], '\0');
}

TEST(BinaryFormat, Truncated) {
    std::stringstream buf;
    write_matrix(buf, CMatrix(4, 4), MatrixFormat::binary);
    std::istringstream in(buf.str().substr(0, 40));
    EXPECT_THROW(read_matrix(in, MatrixFormat::binary), Error);
}

TEST(JsonFormat, RoundTrip) {
    std::mt19937_64 rng(23);
    const auto a = random_symmetric(6, rng);
    std::stringstream buf;
    write_matrix(buf, a, MatrixFormat::json);
    EXPECT_EQ(detect_format(buf), MatrixFormat::json);
    EXPECT_EQ(read_matrix(buf, MatrixFormat::json), a);
}

TEST(JsonFormat, Parses) {
    std::istringstream in(R"({"n": 2, "re": [[0, 1], [1, 0]], "im": [[0, 0.5], [0.5, 0]]})");
    EXPECT_EQ(read_matrix(in, MatrixFormat::json)(0, 1), cplx(1.0, 0.5));
}

TEST(JsonFormat, Malformed) {
    std::istringstream in(R"({"n": 2, "re": [[0, 1]]})");
    EXPECT_THROW(read_matrix(in, MatrixFormat::json), Error);
}

TEST(Detect, ByLeadingBytes) {
    std::stringstream bin;
    write_matrix(bin, CMatrix(2, 2), MatrixFormat::binary);
    EXPECT_EQ(detect_format(bin), MatrixFormat::binary);
    std::istringstream text("2\n0 0 0 0\n0 0 0 0\n");
    EXPECT_EQ(detect_format(text), MatrixFormat::text);
}

TEST(Factor, RectangularRoundTrips) {
    std::mt19937_64 rng(24);
    const auto g = random_matrix(6, 2, rng);
    for (auto f : {MatrixFormat::text, MatrixFormat::binary, MatrixFormat::json}) {
        std::stringstream buf;
        write_factor(buf, g, f);
        EXPECT_EQ(read_factor(buf, f), g) << format_name(f);
    }
}

TEST(Factor, TextHeader) {
    std::istringstream in("4 1\n1 0\n1 0\n1 0\n1 0\n");
    EXPECT_EQ(read_factor(in, MatrixFormat::text), hafnium::test::ones(4, 1));
}
