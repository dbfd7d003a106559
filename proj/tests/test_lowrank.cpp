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

#include <map>

#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace hafnium;
using hafnium::test::ones;
using hafnium::test::random_matrix;
using hafnium::test::rel_err;

namespace {

// Multiplies out the linear forms one term at a time, keyed by exponent tuple.
std::map<Partition, cplx> naive_expansion(const CMatrix& g) {
    std::map<Partition, cplx> cur{{Partition(g.cols(), 0), cplx(1.0)}};
    for (std::size_t i = 0; i < g.rows(); ++i) {
        std::map<Partition, cplx> next;
        for (const auto& [p, c] : cur)
            for (std::size_t j = 0; j < g.cols(); ++j) {
                Partition q = p;
                ++q[j];
                next[q] += c * g(i, j);
            }
        cur = std::move(next);
    }
    return cur;
}

std::vector<Partition> all_partitions(std::uint32_t total, std::size_t r) {
    std::vector<Partition> out;
    Partition p(r, 0);
    auto rec = [&](auto& self, std::size_t i, std::uint32_t left) -> void {
        if (i + 1 == r) {
            p[i] = left;
            out.push_back(p);
            return;
        }
        for (std::uint32_t v = 0; v <= left; ++v) {
            p[i] = v;
            self(self, i + 1, left - v);
        }
    };
    rec(rec, 0, total);
    return out;
}

} // namespace

TEST(Expand, SingleColumnSquare) {
    const auto c = expand_product(ones(2, 1));
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c[0], cplx(1.0));
}

TEST(Expand, IdentityFactor) {
    const auto c = expand_product(CMatrix::identity(2));
    ASSERT_EQ(c.size(), 3u);
    const Partition p11{1, 1}, p20{2, 0}, p02{0, 2};
    EXPECT_EQ(c[partition_rank(p11, 2)], cplx(1.0));
    EXPECT_EQ(c[partition_rank(p20, 2)], cplx{});
    EXPECT_EQ(c[partition_rank(p02, 2)], cplx{});
}

TEST(Expand, MatchesNaiveExpansion) {
    std::mt19937_64 rng(81);
    for (std::size_t r = 1; r <= 3; ++r) {
        const auto g = random_matrix(4, r, rng);
        const auto dense = expand_product(g);
        const auto naive = naive_expansion(g);
        ASSERT_EQ(dense.size(), partition_count(4, r));
        for (const auto& p : all_partitions(4, r)) {
            const auto it = naive.find(p);
            const cplx want = it == naive.end() ? cplx{} : it->second;
            EXPECT_LT(std::abs(dense[partition_rank(p, 4)] - want), 1e-14);
        }
    }
}

TEST(Expand, RowSumChecksum) {
    std::mt19937_64 rng(82);
    for (std::size_t rows = 2; rows <= 10; rows += 2)
        for (std::size_t r = 1; r <= 4; ++r) {
            const auto g = random_matrix(rows, r, rng);
            const auto c = expand_product(g);
            cplx total{}, prod = 1.0;
            for (const auto& x : c) total += x;
            for (std::size_t i = 0; i < rows; ++i) {
                cplx row{};
                for (std::size_t j = 0; j < r; ++j) row += g(i, j);
                prod *= row;
            }
            EXPECT_LT(rel_err(total, prod), 1e-12);
        }
}

TEST(Expand, CapacityExceeded) {
    try {
        expand_product(CMatrix(40, 8), 1000);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::CapacityExceeded);
    }
}

TEST(Lowrank, OnesFourIsThree) {
    EXPECT_EQ(hafnian_lowrank(ones(4, 1)), cplx(3.0));
}

TEST(Lowrank, SingleEdge) {
    EXPECT_EQ(hafnian_lowrank(ones(2, 1)), cplx(1.0));
}

TEST(Lowrank, OddRows) {
    EXPECT_THROW(hafnian_lowrank(ones(3, 1)), Error);
}

TEST(Lowrank, MatchesDenseEngine) {
    std::mt19937_64 rng(83);
    for (std::size_t rows = 2; rows <= 10; rows += 2)
        for (std::size_t r = 1; r <= 3; ++r)
            for (int rep = 0; rep < 3; ++rep) {
                const auto g = random_matrix(rows, r, rng);
                EXPECT_LT(rel_err(hafnian_lowrank(g), hafnian(gram(g))), 1e-9) << rows << "x" << r;
            }
}

TEST(Lowrank, SixByTwo) {
    std::mt19937_64 rng(84);
    const auto g = random_matrix(6, 2, rng);
    EXPECT_LT(rel_err(hafnian_lowrank(g), hafnian(gram(g))), 1e-9);
}

TEST(Lowrank, ColumnPermutationInvariance) {
    std::mt19937_64 rng(85);
    const auto g = random_matrix(8, 3, rng);
    const std::size_t perm[] = {2, 0, 1};
    CMatrix h(8, 3);
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 3; ++j) h(i, j) = g(i, perm[j]);
    EXPECT_LT(rel_err(hafnian_lowrank(h), hafnian_lowrank(g)), 1e-12);
}

TEST(Lowrank, OddTuplesContributeNothing) {
    std::mt19937_64 rng(86);
    const auto g = random_matrix(8, 3, rng);
    auto coeffs = expand_product(g);
    const cplx full = even_partition_sum(coeffs, 8, 3);
    for (const auto& p : all_partitions(8, 3)) {
        const bool odd = std::any_of(p.begin(), p.end(), [](auto e) { return e % 2 != 0; });
        if (odd) coeffs[partition_rank(p, 8)] = cplx{};
    }
    EXPECT_EQ(even_partition_sum(coeffs, 8, 3), full);
}

TEST(Lowrank, CoefficientLengthChecked) {
    EXPECT_THROW(even_partition_sum(std::vector<cplx>(4), 4, 2), Error);
}

TEST(Partitions, SmallRanks) {
    const Partition p02{0, 2}, p11{1, 1}, p20{2, 0};
    EXPECT_EQ(partition_rank(p02, 2), 0u);
    EXPECT_EQ(partition_rank(p11, 2), 1u);
    EXPECT_EQ(partition_rank(p20, 2), 2u);
    EXPECT_EQ(partition_count(2, 2), 3u);
}

TEST(Partitions, Bijection) {
    const auto ps = all_partitions(6, 3);
    ASSERT_EQ(ps.size(), partition_count(6, 3));
    std::vector<bool> seen(ps.size(), false);
    for (const auto& p : ps) {
        const auto rank = partition_rank(p, 6);
        ASSERT_LT(rank, ps.size());
        EXPECT_FALSE(seen[rank]);
        seen[rank] = true;
        EXPECT_EQ(partition_unrank(rank, 6, 3), p);
    }
}

TEST(Partitions, SuccessorWalksRanksInOrder) {
    for (std::size_t r = 1; r <= 4; ++r) {
        Partition p(r, 0);
        p[r - 1] = 7;
        std::uint64_t expected = 0;
        do {
            EXPECT_EQ(partition_rank(p, 7), expected++);
        } while (next_partition(p));
        EXPECT_EQ(expected, partition_count(7, r));
    }
}

TEST(Partitions, EvenCount) {
    std::size_t even = 0;
    for (const auto& p : all_partitions(4, 2))
        if (std::all_of(p.begin(), p.end(), [](auto e) { return e % 2 == 0; })) ++even;
    EXPECT_EQ(even, 3u);
    EXPECT_EQ(even, binomial(3, 1));
}

TEST(Partitions, OutOfRange) {
    EXPECT_THROW(partition_unrank(3, 2, 2), Error);
    const Partition bad{1, 2};
    EXPECT_THROW(partition_rank(bad, 2), Error);
}

TEST(Binomial, Values) {
    EXPECT_EQ(binomial(5, 2), 10u);
    EXPECT_EQ(binomial(2, 5), 0u);
    EXPECT_EQ(binomial(64, 32), 1832624140942590534u);
    EXPECT_EQ(binomial(200, 100), std::numeric_limits<std::uint64_t>::max());
}
