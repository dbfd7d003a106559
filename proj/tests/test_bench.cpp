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

#include <sstream>
#include <thread>

#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace hafnium;

TEST(Generate, Complete) {
    const auto a = generate(Family::complete, 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(a(i, j), cplx(i == j ? 0.0 : 1.0));
}

TEST(Generate, CompleteLoops) {
    EXPECT_EQ(generate(Family::complete_loops, 4).matrix(), test::ones(4, 4));
}

TEST(Generate, Bipartite) {
    const CMatrix want{{0.0, 0.0, 1.0, 1.0}, {0.0, 0.0, 1.0, 1.0}, {1.0, 1.0, 0.0, 0.0}, {1.0, 1.0, 0.0, 0.0}};
    EXPECT_EQ(generate(Family::bipartite, 4).matrix(), want);
}

TEST(Generate, RandomIsDeterministicAndSymmetric) {
    const auto a = generate(Family::random, 6, 7);
    EXPECT_EQ(a, generate(Family::random, 6, 7));
    EXPECT_NE(a, generate(Family::random, 6, 8));
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) {
            EXPECT_EQ(a(i, j), a(j, i));
            EXPECT_LE(std::abs(a(i, j).real()), 1.0);
            EXPECT_LE(std::abs(a(i, j).imag()), 1.0);
        }
}

TEST(Generate, BadFamily) {
    try {
        parse_family("petersen");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::BadFamily);
    }
    for (auto f : {Family::complete, Family::complete_loops, Family::bipartite, Family::random})
        EXPECT_EQ(parse_family(family_name(f)), f);
}

TEST(Reference, Values) {
    EXPECT_EQ(*reference_value(Family::complete, 20), 654729075);
    EXPECT_EQ(*reference_value(Family::bipartite, 20), 3628800);
    EXPECT_EQ(*reference_value(Family::complete_loops, 10), 9496);
    EXPECT_FALSE(reference_value(Family::random, 10).has_value());
}

TEST(PercentError, Examples) {
    EXPECT_EQ(percent_error(cplx(3.0), BigInt(3)).signed_real, 0.0);
    EXPECT_NEAR(percent_error(cplx(2.97), BigInt(3)).signed_real, -1.0, 1e-12);
    EXPECT_NEAR(percent_error(cplx(2.97), BigInt(3)).magnitude, 1.0, 1e-12);
    EXPECT_NEAR(percent_error(cplx(3.0, 0.03), cplx(3.0)).magnitude, 1.0, 1e-12);
}

TEST(PercentError, ZeroReference) {
    try {
        percent_error(cplx(1.0), BigInt(0));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::DivisionByZeroReference);
    }
}

TEST(PercentError, CompleteTwenty) {
    const auto rec = run_point(Family::complete, 20, {}, 0, 0);
    ASSERT_TRUE(rec.error.has_value());
    EXPECT_LT(std::abs(rec.error->signed_real), 1e-7);
}

TEST(Sweep, CompleteEightToSixteen) {
    SweepConfig cfg;
    cfg.n_min = 8;
    cfg.n_max = 16;
    const auto res = sweep(cfg);
    ASSERT_EQ(res.records.size(), 5u);
    EXPECT_FALSE(res.budget_exceeded);
    for (const auto& r : res.records) {
        ASSERT_TRUE(r.error.has_value());
        EXPECT_LT(r.error->magnitude, 1e-9) << r.n;
    }
}

TEST(Sweep, RandomHasNoReference) {
    SweepConfig cfg;
    cfg.family = Family::random;
    cfg.n_min = 8;
    cfg.n_max = 12;
    for (const auto& r : sweep(cfg).records) {
        EXPECT_FALSE(r.reference.has_value());
        EXPECT_FALSE(r.error.has_value());
        const auto row = to_csv_row(r);
        EXPECT_EQ(row.substr(row.size() - 3), ",,,");
    }
}

TEST(Sweep, RepetitionsAreIdentical) {
    SweepConfig cfg;
    cfg.n_min = 10;
    cfg.n_max = 12;
    cfg.repetitions = 3;
    const auto recs = sweep(cfg).records;
    ASSERT_EQ(recs.size(), 6u);
    for (std::size_t i = 0; i < recs.size(); ++i) {
        EXPECT_EQ(recs[i].repetition, i % 3);
        EXPECT_EQ(recs[i].result, recs[i - i % 3].result);
    }
}

TEST(Sweep, BudgetStopsEarly) {
    SweepConfig cfg;
    cfg.n_min = 8;
    cfg.n_max = 60;
    cfg.budget_seconds = 0.5;
    std::size_t seen = 0;
    const auto res = sweep(cfg, [&](const BenchmarkRecord&) { ++seen; });
    EXPECT_TRUE(res.budget_exceeded);
    EXPECT_EQ(seen, res.records.size());
    EXPECT_LT(res.records.back().n, 60u);
}

TEST(Sweep, BadStep) {
    SweepConfig cfg;
    cfg.step = 3;
    EXPECT_THROW(sweep(cfg), Error);
}

TEST(Csv, HeaderAndRow) {
    EXPECT_EQ(csv_header,
              "family,n,threads,backend,mode,repetition,wall_seconds,result_re,result_im,reference,"
              "percent_error_re,percent_error_abs");
    const auto rec = run_point(Family::complete, 4, {}, 0, 0);
    const auto row = to_csv_row(rec);
    EXPECT_EQ(row.rfind("complete,4,1,spectral,deterministic,0,", 0), 0u);
    EXPECT_EQ(std::count(row.begin(), row.end(), ','), 11);
}

TEST(Csv, ReadsTimings) {
    std::istringstream in("# generator=mt19937_64 seed=0\n" + std::string(csv_header) +
                          "\ncomplete,24,1,spectral,deterministic,0,0.5,1,0,3,0,0\n"
                          "complete,26,1,spectral,deterministic,0,1.25,1,0,3,0,0\n");
    const auto pts = read_timing_csv(in);
    ASSERT_EQ(pts.size(), 2u);
    EXPECT_EQ(pts[1].n, 26.0);
    EXPECT_EQ(pts[1].seconds, 1.25);
}

TEST(Csv, BadHeader) {
    std::istringstream in("a,b\n1,2\n");
    EXPECT_THROW(read_timing_csv(in), ParseError);
}

TEST(Fit, RecoversGenerator) {
    std::vector<TimingPoint> pts;
    for (double n = 22; n <= 40; n += 2) pts.push_back({n, n * n * n * std::exp2(n / 2)});
    const auto fit = fit_scaling(pts, 20);
    EXPECT_NEAR(fit.b, 3.0, 1e-9);
    EXPECT_NEAR(fit.c, 0.5, 1e-9);
    EXPECT_NEAR(fit.a, 1.0, 1e-9);
    EXPECT_LT(fit.residual, 1e-9);
    EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
    EXPECT_EQ(fit.points, pts.size());
}

TEST(Fit, InsufficientData) {
    std::vector<TimingPoint> pts{{22, 1}, {24, 2}, {26, 4}, {28, 8}, {10, 1}, {12, 1}};
    try {
        fit_scaling(pts, 20);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::InsufficientData);
    }
    // Five points but only two sizes.
    std::vector<TimingPoint> two{{22, 1}, {22, 1.1}, {24, 2}, {24, 2.1}, {24, 2.2}};
    EXPECT_THROW(fit_scaling(two, 20), Error);
}

TEST(Medians, PerSize) {
    std::vector<BenchmarkRecord> recs(4);
    recs[0].n = recs[1].n = recs[2].n = 8;
    recs[3].n = 10;
    recs[0].wall_seconds = 3;
    recs[1].wall_seconds = 1;
    recs[2].wall_seconds = 2;
    recs[3].wall_seconds = 5;
    const auto med = median_wall_seconds(recs);
    EXPECT_EQ(med.at(8), 2.0);
    EXPECT_EQ(med.at(10), 5.0);
}

TEST(Scaling, StrongAndWeakShapes) {
    const auto strong = thread_scaling(Family::complete, 16, {1, 2, 4});
    ASSERT_EQ(strong.size(), 3u);
    for (const auto& r : strong) EXPECT_EQ(r.result, strong[0].result);
    EXPECT_EQ(strong[2].threads, 4u);
    const auto weak = weak_scaling(Family::complete, 12, 1, 3);
    ASSERT_EQ(weak.size(), 3u);
    EXPECT_EQ(weak[2].n, 16u);
    EXPECT_EQ(weak[2].threads, 4u);
}

// Timing claims only mean something with real parallel hardware.
TEST(Scaling, StrongWallTimeNonincreasing) {
    if (std::thread::hardware_concurrency() < 8) GTEST_SKIP() << "needs 8 hardware threads";
    const auto recs = thread_scaling(Family::complete, 32, {1, 2, 4, 8});
    for (std::size_t i = 1; i < recs.size(); ++i)
        EXPECT_LE(recs[i].wall_seconds, recs[i - 1].wall_seconds) << recs[i].threads << " threads";
}

TEST(Scaling, WeakPlateau) {
    if (std::thread::hardware_concurrency() < 8) GTEST_SKIP() << "needs 8 hardware threads";
    const auto recs = weak_scaling(Family::complete, 24, 1, 4);
    ASSERT_EQ(recs.back().n, 30u);
    ASSERT_EQ(recs.back().threads, 8u);
    for (const auto& r : recs) EXPECT_LE(r.wall_seconds, 2.0 * recs.front().wall_seconds) << r.n;
}
