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

// Hafnian of G G^T for a tall 2n x r factor G.
//
// Expanding q(x) = prod_i sum_j g_ij x_j gives coefficients lambda_p over
// the exponent tuples p with |p| = 2n. Only tuples with every entry even
// survive, and
//
//   haf(G G^T) = sum_{e even} lambda_e prod_i (e_i - 1)!!
//
// Exponent tuples are stored densely, ranked colexicographically through
// their stars-and-bars bar positions.

#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "hafnium/matrix.hpp"

namespace hafnium {

/// Exponent tuple (p_1..p_r) with a fixed total.
using Partition = std::vector<std::uint32_t>;

inline constexpr std::uint64_t default_lowrank_budget = std::uint64_t{1} << 30;

/// binom(n, k), saturating at uint64 max.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
    }
    return static_cast<std::uint64_t>(r);
}

/// Number of r-tuples of nonnegative integers summing to total.
inline std::uint64_t partition_count(std::uint64_t total, std::uint64_t r) {
    if (r == 0) return total == 0 ? 1 : 0;
    return binomial(total + r - 1, r - 1);
}

/// Colex rank of the bar positions b_i = p_1 + ... + p_i + i - 1, i < r.
inline std::uint64_t partition_rank(std::span<const std::uint32_t> p, std::uint64_t total) {
    if (p.empty()) throw Error(Errc::OutOfRange, "partition needs at least one part");
    std::uint64_t prefix = 0, rank = 0;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        prefix += p[i];
        rank += binomial(prefix + i, i + 1);
    }
    if (prefix + p.back() != total) throw Error(Errc::OutOfRange, "partition does not sum to its total");
    return rank;
}

inline Partition partition_unrank(std::uint64_t rank, std::uint64_t total, std::size_t r) {
    if (r == 0) throw Error(Errc::OutOfRange, "partition needs at least one part");
    if (rank >= partition_count(total, r))
        throw Error(Errc::OutOfRange, "rank " + std::to_string(rank) + " out of range");
    // Recover bar positions from the largest down (combinatorial number system).
    std::vector<std::uint64_t> bars(r - 1);
    std::uint64_t pos = total + r - 1;
    for (std::size_t i = r - 1; i >= 1; --i) {
        do {
            --pos;
        } while (binomial(pos, i) > rank);
        bars[i - 1] = pos;
        rank -= binomial(pos, i);
    }
    Partition p(r);
    std::uint64_t prev = 0;
    for (std::size_t i = 0; i + 1 < r; ++i) {
        const std::uint64_t start = i == 0 ? 0 : prev + 1;
        p[i] = static_cast<std::uint32_t>(bars[i] - start);
        prev = bars[i];
    }
    p[r - 1] = static_cast<std::uint32_t>(total + r - 1 - (r == 1 ? 0 : prev + 1));
    return p;
}

/// Steps p to the colex successor among tuples with the same total.
/// Returns false after the last tuple.
inline bool next_partition(std::span<std::uint32_t> p) {
    // Advance the lowest bar that can move: take one unit from the first
    // nonzero part p[i+1] and pile everything below it into p[i].
    const std::size_t r = p.size();
    for (std::size_t i = 0; i + 1 < r; ++i) {
        if (p[i + 1] == 0) continue;
        std::uint32_t carry = 0;
        for (std::size_t j = 0; j <= i; ++j) {
            carry += p[j];
            p[j] = 0;
        }
        --p[i + 1];
        p[i] = carry + 1;
        return true;
    }
    return false;
}

/// Dense coefficients of prod_i (sum_j g_ij x_j), indexed by partition_rank
/// over tuples summing to g.rows().
inline std::vector<cplx> expand_product(const CMatrix& g, std::uint64_t budget = default_lowrank_budget) {
    const std::size_t rows = g.rows();
    const std::size_t r = g.cols();
    if (r == 0) throw Error(Errc::OutOfRange, "factor needs at least one column");
    const std::uint64_t final_count = partition_count(rows, r);
    if (final_count > budget)
        throw Error(Errc::CapacityExceeded, std::to_string(final_count) + " coefficients exceed the budget of " +
                                                std::to_string(budget));
    std::vector<cplx> cur{cplx(1.0)}, next;
    Partition p(r);
    for (std::size_t t = 0; t < rows; ++t) {
        next.assign(partition_count(t + 1, r), cplx{});
        std::fill(p.begin(), p.end(), 0);
        p[r - 1] = static_cast<std::uint32_t>(t);
        std::uint64_t idx = 0;
        do {
            const cplx c = cur[idx++];
            if (c != cplx{}) {
                for (std::size_t j = 0; j < r; ++j) {
                    ++p[j];
                    next[partition_rank(p, t + 1)] += c * g(t, j);
                    --p[j];
                }
            }
        } while (next_partition(p));
        std::swap(cur, next);
    }
    return cur;
}

/// sum over all-even tuples e of coeffs[rank(e)] * prod_i (e_i - 1)!!.
/// Odd tuples contribute nothing whatever their coefficient.
inline cplx even_partition_sum(std::span<const cplx> coeffs, std::uint64_t total, std::size_t r) {
    if (r == 0) throw Error(Errc::OutOfRange, "partition needs at least one part");
    if (coeffs.size() != partition_count(total, r))
        throw Error(Errc::LengthMismatch, "expected " + std::to_string(partition_count(total, r)) +
                                              " coefficients, got " + std::to_string(coeffs.size()));
    // (2h-1)!! as doubles.
    std::vector<double> dfact(total / 2 + 1, 1.0);
    for (std::size_t h = 1; h < dfact.size(); ++h) dfact[h] = dfact[h - 1] * static_cast<double>(2 * h - 1);

    cplx sum{};
    Partition p(r);
    p[r - 1] = static_cast<std::uint32_t>(total);
    std::uint64_t idx = 0;
    do {
        bool even = true;
        double weight = 1.0;
        for (auto e : p) {
            if (e % 2 != 0) {
                even = false;
                break;
            }
            weight *= dfact[e / 2];
        }
        if (even) sum += coeffs[idx] * weight;
        ++idx;
    } while (next_partition(p));
    return sum;
}

/// haf(G G^T) with the diagonal of G G^T ignored. G must have an even
/// number of rows.
inline cplx hafnian_lowrank(const CMatrix& g, std::uint64_t budget = default_lowrank_budget) {
    if (g.rows() % 2 != 0) throw Error(Errc::OddDimension, "factor must have an even number of rows");
    const auto coeffs = expand_product(g, budget);
    return even_partition_sum(coeffs, g.rows(), g.cols());
}

/// Symmetric G G^T, the dense counterpart of a low-rank factor.
inline ComplexSymmetricMatrix gram(const CMatrix& g) {
    CMatrix a(g.rows(), g.rows());
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = i; j < g.rows(); ++j) {
            cplx s{};
            for (std::size_t k = 0; k < g.cols(); ++k) s += g(i, k) * g(j, k);
            a(i, j) = s;
        }
    return ComplexSymmetricMatrix::from_upper(std::move(a));
}

} // namespace hafnium
