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

// Matrix file formats.
//
//   text    first non-comment line "n" (square) or "rows cols" (rectangular),
//           then one line per row holding 2*cols floats "re im re im ...".
//           Lines whose first non-blank character is '#' are comments.
//   binary  magic "HAFM1", u64 n, then n*n (re, im) f64 pairs, row-major.
//           Rectangular factors use magic "HAFR1", u64 rows, u64 cols.
//           All integers and floats little-endian.
//   json    {"n": n, "re": [[...]], "im": [[...]]}; rectangular files carry
//           "rows" and "cols" instead of "n".

#pragma once

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "hafnium/matrix.hpp"

namespace hafnium {

enum class MatrixFormat { text, binary, json };

inline MatrixFormat parse_format(std::string_view name) {
    if (name == "text") return MatrixFormat::text;
    if (name == "binary") return MatrixFormat::binary;
    if (name == "json") return MatrixFormat::json;
    throw Error(Errc::ParseError, "unknown matrix format '" + std::string(name) + "'");
}

inline constexpr std::string_view format_name(MatrixFormat f) {
    switch (f) {
    case MatrixFormat::text: return "text";
    case MatrixFormat::binary: return "binary";
    case MatrixFormat::json: return "json";
    }
    return "text";
}

namespace detail {

inline constexpr std::string_view square_magic = "HAFM1";
inline constexpr std::string_view rect_magic = "HAFR1";

template <typename U>
U to_little(U v) {
    if constexpr (std::endian::native == std::endian::big) {
        auto bytes = std::bit_cast<std::array<unsigned char, sizeof(U)>>(v);
        std::reverse(bytes.begin(), bytes.end());
        return std::bit_cast<U>(bytes);
    }
    return v;
}

inline void put_u64(std::ostream& os, std::uint64_t v) {
    v = to_little(v);
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

inline void put_f64(std::ostream& os, double x) {
    put_u64(os, std::bit_cast<std::uint64_t>(x));
}

inline std::uint64_t get_u64(std::istream& is) {
    std::uint64_t v = 0;
    if (!is.read(reinterpret_cast<char*>(&v), sizeof v)) throw ParseError("truncated binary matrix", 0);
    return to_little(v);
}

inline double get_f64(std::istream& is) { return std::bit_cast<double>(get_u64(is)); }

struct Tokenizer {
    std::string_view line;
    std::size_t pos = 0;

    // Returns false at end of line; sets column to the 1-based start of the token.
    bool next(std::string_view& tok, std::size_t& column) {
        while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
        if (pos >= line.size()) return false;
        const std::size_t start = pos;
        while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
        tok = line.substr(start, pos - start);
        column = start + 1;
        return true;
    }
};

template <typename Num>
Num parse_number(std::string_view tok, std::size_t line, std::size_t column) {
    Num v{};
    // from_chars rejects a leading '+', which some writers emit.
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw ParseError("invalid number '" + std::string(tok) + "'", line, column);
    return v;
}

inline bool is_comment_or_blank(std::string_view s) {
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        return c == '#';
    }
    return true;
}

inline CMatrix read_text(std::istream& is, bool require_square) {
    std::string buf;
    std::size_t line_no = 0;
    std::size_t rows = 0, cols = 0;
    bool have_header = false;
    CMatrix m;
    std::size_t row = 0;
    while (std::getline(is, buf)) {
        ++line_no;
        if (is_comment_or_blank(buf)) continue;
        Tokenizer t{buf};
        std::string_view tok;
        std::size_t col = 0;
        if (!have_header) {
            t.next(tok, col);
            rows = parse_number<std::size_t>(tok, line_no, col);
            cols = rows;
            if (t.next(tok, col)) {
                if (require_square) throw ParseError("square matrix header takes a single integer", line_no, col);
                cols = parse_number<std::size_t>(tok, line_no, col);
            }
            if (t.next(tok, col)) throw ParseError("unexpected token in header", line_no, col);
            m = CMatrix(rows, cols);
            have_header = true;
            continue;
        }
        if (row >= rows)
            throw Error(Errc::DimensionMismatch, "line " + std::to_string(line_no) + ": more than " +
                                                     std::to_string(rows) + " rows");
        std::size_t count = 0;
        double re = 0.0;
        while (t.next(tok, col)) {
            const double x = parse_number<double>(tok, line_no, col);
            if (count >= 2 * cols)
                throw Error(Errc::DimensionMismatch, "line " + std::to_string(line_no) + ": more than " +
                                                         std::to_string(2 * cols) + " values");
            if (count % 2 == 0) re = x;
            else m(row, count / 2) = cplx(re, x);
            ++count;
        }
        if (count != 2 * cols)
            throw Error(Errc::DimensionMismatch, "line " + std::to_string(line_no) + ": expected " +
                                                     std::to_string(2 * cols) + " values, found " +
                                                     std::to_string(count));
        ++row;
    }
    if (!have_header) throw ParseError("missing dimension header", line_no + 1);
    if (row != rows)
        throw Error(Errc::DimensionMismatch,
                    "expected " + std::to_string(rows) + " rows, found " + std::to_string(row));
    return m;
}

inline void write_text(std::ostream& os, const CMatrix& m, bool square) {
    if (square) os << m.rows() << '\n';
    else os << m.rows() << ' ' << m.cols() << '\n';
    os << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) os << ' ';
            os << m(i, j).real() << ' ' << m(i, j).imag();
        }
        os << '\n';
    }
}

inline CMatrix read_binary(std::istream& is, bool require_square) {
    char magic[5];
    if (!is.read(magic, 5)) throw ParseError("truncated binary header", 0);
    const std::string_view tag(magic, 5);
    std::uint64_t rows = 0, cols = 0;
    if (tag == square_magic) {
        rows = cols = get_u64(is);
    } else if (tag == rect_magic) {
        if (require_square) throw ParseError("rectangular binary file where a square matrix was expected", 0);
        rows = get_u64(is);
        cols = get_u64(is);
    } else {
        throw ParseError("bad magic bytes", 0);
    }
    if (rows > (1u << 16) || cols > (1u << 16)) throw Error(Errc::DimensionMismatch, "implausible dimension");
    CMatrix m(rows, cols);
    for (auto& x : m.data()) {
        const double re = get_f64(is);
        x = cplx(re, get_f64(is));
    }
    if (is.peek() != std::char_traits<char>::eof()) throw Error(Errc::DimensionMismatch, "trailing bytes after matrix data");
    return m;
}

inline void write_binary(std::ostream& os, const CMatrix& m, bool square) {
    if (square) {
        os.write(square_magic.data(), 5);
        put_u64(os, m.rows());
    } else {
        os.write(rect_magic.data(), 5);
        put_u64(os, m.rows());
        put_u64(os, m.cols());
    }
    for (const auto& x : m.data()) {
        put_f64(os, x.real());
        put_f64(os, x.imag());
    }
}

inline CMatrix read_json(std::istream& is, bool require_square) {
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(e.what(), 0);
    }
    try {
        std::size_t rows = 0, cols = 0;
        if (j.contains("n")) {
            rows = cols = j.at("n").get<std::size_t>();
        } else {
            if (require_square) throw ParseError("missing \"n\"", 0);
            rows = j.at("rows").get<std::size_t>();
            cols = j.at("cols").get<std::size_t>();
        }
        const auto& re = j.at("re");
        const auto& im = j.at("im");
        if (re.size() != rows || im.size() != rows)
            throw Error(Errc::DimensionMismatch, "row count differs from declared dimension");
        CMatrix m(rows, cols);
        for (std::size_t r = 0; r < rows; ++r) {
            if (re[r].size() != cols || im[r].size() != cols)
                throw Error(Errc::DimensionMismatch, "row " + std::to_string(r) + " has the wrong length");
            for (std::size_t c = 0; c < cols; ++c) m(r, c) = cplx(re[r][c].get<double>(), im[r][c].get<double>());
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(e.what(), 0);
    }
}

inline void write_json(std::ostream& os, const CMatrix& m, bool square) {
    nlohmann::json j;
    if (square) j["n"] = m.rows();
    else {
        j["rows"] = m.rows();
        j["cols"] = m.cols();
    }
    auto re = nlohmann::json::array();
    auto im = nlohmann::json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        auto rr = nlohmann::json::array();
        auto ri = nlohmann::json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) {
            rr.push_back(m(r, c).real());
            ri.push_back(m(r, c).imag());
        }
        re.push_back(std::move(rr));
        im.push_back(std::move(ri));
    }
    j["re"] = std::move(re);
    j["im"] = std::move(im);
    os << j.dump() << '\n';
}

inline CMatrix read_dense(std::istream& is, MatrixFormat f, bool require_square) {
    switch (f) {
    case MatrixFormat::text: return read_text(is, require_square);
    case MatrixFormat::binary: return read_binary(is, require_square);
    case MatrixFormat::json: return read_json(is, require_square);
    }
    return {};
}

inline void write_dense(std::ostream& os, const CMatrix& m, MatrixFormat f, bool square) {
    switch (f) {
    case MatrixFormat::text: write_text(os, m, square); break;
    case MatrixFormat::binary: write_binary(os, m, square); break;
    case MatrixFormat::json: write_json(os, m, square); break;
    }
}

inline std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot open '" + path + "'");
    return in;
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoError, "cannot write '" + path + "'");
    return out;
}

} // namespace detail

/// Guess the format from the leading bytes: binary magic, '{' for json, else text.
inline MatrixFormat detect_format(std::istream& is) {
    const auto start = is.tellg();
    char head[5] = {};
    is.read(head, 5);
    const auto got = is.gcount();
    is.clear();
    is.seekg(start);
    const std::string_view tag(head, static_cast<std::size_t>(got));
    if (tag == detail::square_magic || tag == detail::rect_magic) return MatrixFormat::binary;
    for (char c : tag) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        return c == '{' ? MatrixFormat::json : MatrixFormat::text;
    }
    return MatrixFormat::text;
}

inline CMatrix read_raw_matrix(std::istream& is, MatrixFormat f) { return detail::read_dense(is, f, true); }

inline ComplexSymmetricMatrix read_matrix(std::istream& is, MatrixFormat f,
                                          SymmetryMode mode = SymmetryMode::strict) {
    return validate_or_symmetrize(read_raw_matrix(is, f), mode);
}

inline ComplexSymmetricMatrix read_matrix(const std::string& path, MatrixFormat f,
                                          SymmetryMode mode = SymmetryMode::strict) {
    auto in = detail::open_in(path);
    return read_matrix(in, f, mode);
}

inline ComplexSymmetricMatrix read_matrix(const std::string& path, SymmetryMode mode = SymmetryMode::strict) {
    auto in = detail::open_in(path);
    return read_matrix(in, detect_format(in), mode);
}

inline void write_matrix(std::ostream& os, const CMatrix& m, MatrixFormat f) {
    if (!m.is_square()) throw Error(Errc::NonSquare, "write_matrix expects a square matrix");
    detail::write_dense(os, m, f, true);
}

inline void write_matrix(std::ostream& os, const ComplexSymmetricMatrix& a, MatrixFormat f) {
    write_matrix(os, a.matrix(), f);
}

inline void write_matrix(const ComplexSymmetricMatrix& a, const std::string& path, MatrixFormat f) {
    auto out = detail::open_out(path);
    write_matrix(out, a, f);
}

/// Rectangular reader for low-rank factors; a square header is accepted too.
inline CMatrix read_factor(std::istream& is, MatrixFormat f) { return detail::read_dense(is, f, false); }

inline CMatrix read_factor(const std::string& path) {
    auto in = detail::open_in(path);
    return read_factor(in, detect_format(in));
}

inline void write_factor(std::ostream& os, const CMatrix& g, MatrixFormat f) { detail::write_dense(os, g, f, false); }

inline void write_factor(const CMatrix& g, const std::string& path, MatrixFormat f) {
    auto out = detail::open_out(path);
    write_factor(out, g, f);
}

} // namespace hafnium
