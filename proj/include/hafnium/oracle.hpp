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

// Reference values by direct enumeration. These are slow by construction
// and exist to check the fast paths.

#pragma once

#include <bit>
#include <cstdint>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "hafnium/matrix.hpp"

namespace hafnium {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr std::size_t max_bruteforce_hafnian = 16;
inline constexpr std::size_t max_bruteforce_loop_hafnian = 14;
inline constexpr std::size_t max_ryser = 20;
inline constexpr std::size_t max_matching_count = 12;

/// Vertex pairs (i, j) with i <= j; i == j is a loop.
struct Matching {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

namespace detail {

// Matches the smallest uncovered vertex with every larger uncovered vertex
// (and with itself when loops are allowed); each matching appears once.
template <typename Visit>
void enumerate_matchings(std::size_t n, bool loops, std::vector<bool>& used, Matching& cur, Visit& visit) {
    std::size_t first = 0;
    while (first < n && used[first]) ++first;
    if (first == n) {
        visit(static_cast<const Matching&>(cur));
        return;
    }
    used[first] = true;
    if (loops) {
        cur.pairs.emplace_back(first, first);
        enumerate_matchings(n, loops, used, cur, visit);
        cur.pairs.pop_back();
    }
    for (std::size_t j = first + 1; j < n; ++j) {
        if (used[j]) continue;
        used[j] = true;
        cur.pairs.emplace_back(first, j);
        enumerate_matchings(n, loops, used, cur, visit);
        cur.pairs.pop_back();
        used[j] = false;
    }
    used[first] = false;
}

template <typename T>
T weighted_matchings(const Matrix<T>& a, bool loops, std::uint32_t used) {
    const auto n = static_cast<std::uint32_t>(a.rows());
    std::uint32_t first = 0;
    while (first < n && ((used >> first) & 1u)) ++first;
    if (first == n) return T(1);
    used |= 1u << first;
    T total(0);
    if (loops) total += a(first, first) * weighted_matchings(a, loops, used);
    for (std::uint32_t j = first + 1; j < n; ++j) {
        if ((used >> j) & 1u) continue;
        total += a(first, j) * weighted_matchings(a, loops, used | (1u << j));
    }
    return total;
}

} // namespace detail

/// Calls visit(const Matching&) once per perfect matching of n vertices
/// (single-pair matchings when loops is true).
template <typename Visit>
void for_each_matching(std::size_t n, bool loops, Visit&& visit) {
    std::vector<bool> used(n, false);
    Matching cur;
    detail::enumerate_matchings(n, loops, used, cur, visit);
}

/// Sum over perfect matchings of the product of matched entries. Works for
/// any ring-like T (complex, integers, BigInt).
template <typename T>
T hafnian_bruteforce(const Matrix<T>& a) {
    if (!a.is_square()) throw Error(Errc::NonSquare, "hafnian needs a square matrix");
    if (a.rows() % 2 != 0) throw Error(Errc::OddDimension, "hafnian needs an even dimension");
    if (a.rows() > max_bruteforce_hafnian)
        throw Error(Errc::TooLarge, "brute-force hafnian limited to n <= " + std::to_string(max_bruteforce_hafnian));
    return detail::weighted_matchings(a, false, 0);
}

/// Sum over single-pair matchings (pairs and loops) of the product of
/// matched entries; diagonal entries weight the loops.
template <typename T>
T loop_hafnian_bruteforce(const Matrix<T>& a) {
    if (!a.is_square()) throw Error(Errc::NonSquare, "loop hafnian needs a square matrix");
    if (a.rows() % 2 != 0) throw Error(Errc::OddDimension, "loop hafnian needs an even dimension");
    if (a.rows() > max_bruteforce_loop_hafnian)
        throw Error(Errc::TooLarge,
                    "brute-force loop hafnian limited to n <= " + std::to_string(max_bruteforce_loop_hafnian));
    return detail::weighted_matchings(a, true, 0);
}

inline cplx hafnian_bruteforce(const ComplexSymmetricMatrix& a) { return hafnian_bruteforce(a.matrix()); }
inline cplx loop_hafnian_bruteforce(const ComplexSymmetricMatrix& a) { return loop_hafnian_bruteforce(a.matrix()); }

/// Ryser's formula with Gray-code row sums, O(2^m m).
template <typename T>
T permanent_ryser(const Matrix<T>& w) {
    if (!w.is_square()) throw Error(Errc::NonSquare, "permanent needs a square matrix");
    const std::size_t m = w.rows();
    if (m > max_ryser) throw Error(Errc::TooLarge, "Ryser permanent limited to m <= " + std::to_string(max_ryser));
    if (m == 0) return T(1);
    std::vector<T> row_sums(m, T(0));
    T total(0);
    std::uint64_t gray = 0;
    for (std::uint64_t k = 1; k < (std::uint64_t{1} << m); ++k) {
        const std::uint64_t next = k ^ (k >> 1);
        const std::uint64_t flipped = next ^ gray;
        const auto col = static_cast<std::size_t>(std::countr_zero(flipped));
        const bool added = (next & flipped) != 0;
        for (std::size_t i = 0; i < m; ++i) {
            if (added) row_sums[i] += w(i, col);
            else row_sums[i] -= w(i, col);
        }
        gray = next;
        T prod = row_sums[0];
        for (std::size_t i = 1; i < m; ++i) prod *= row_sums[i];
        const auto popcount = static_cast<std::size_t>(std::popcount(gray));
        if ((m - popcount) % 2 == 0) total += prod;
        else total -= prod;
    }
    return total;
}

/// [[0, W], [W^T, 0]]: the bipartite graph as a simple graph on 2m vertices.
template <typename T>
Matrix<T> bipartite_embedding(const Matrix<T>& w) {
    if (!w.is_square()) throw Error(Errc::NonSquare, "bipartite embedding expects a square block");
    const std::size_t m = w.rows();
    Matrix<T> a(2 * m, 2 * m, T(0));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            a(i, m + j) = w(i, j);
            a(m + j, i) = w(i, j);
        }
    return a;
}

/// k!! with (-1)!! = 0!! = 1.
inline BigInt double_factorial(long k) {
    if (k < -1) throw Error(Errc::OutOfRange, "double factorial defined for k >= -1");
    BigInt r = 1;
    for (long i = k; i > 1; i -= 2) r *= i;
    return r;
}

inline BigInt factorial(long k) {
    if (k < 0) throw Error(Errc::OutOfRange, "factorial defined for k >= 0");
    BigInt r = 1;
    for (long i = 2; i <= k; ++i) r *= i;
    return r;
}

/// Involution counts: T(n) = T(n-1) + (n-1) T(n-2), T(0) = T(1) = 1.
inline BigInt telephone(long n) {
    if (n < 0) throw Error(Errc::OutOfRange, "telephone numbers defined for n >= 0");
    BigInt prev = 1, cur = 1;
    for (long k = 2; k <= n; ++k) {
        BigInt next = cur + (k - 1) * prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

/// Number of matchings (any size, including the empty one) of the loopless
/// graph whose edges are the nonzero off-diagonal entries of `adjacency`.
template <typename T>
BigInt matching_count_bruteforce(const Matrix<T>& adjacency) {
    if (!adjacency.is_square()) throw Error(Errc::NonSquare, "adjacency must be square");
    const std::size_t n = adjacency.rows();
    if (n > max_matching_count)
        throw Error(Errc::TooLarge, "matching count limited to n <= " + std::to_string(max_matching_count));
    auto count = [&](auto& self, std::size_t first, std::uint32_t used) -> BigInt {
        while (first < n && ((used >> first) & 1u)) ++first;
        if (first == n) return 1;
        used |= 1u << first;
        BigInt total = self(self, first + 1, used);
        for (std::size_t j = first + 1; j < n; ++j)
            if (!((used >> j) & 1u) && adjacency(first, j) != T(0))
                total += self(self, first + 1, used | (1u << j));
        return total;
    };
    return count(count, 0, 0);
}

} // namespace hafnium
