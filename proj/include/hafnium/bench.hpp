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

// Benchmark families, reference values, timing sweeps and scaling fits.

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "hafnium/engine.hpp"
#include "hafnium/oracle.hpp"

namespace hafnium {

enum class Family { complete, complete_loops, bipartite, random };

inline Family parse_family(std::string_view name) {
    if (name == "complete") return Family::complete;
    if (name == "complete_loops") return Family::complete_loops;
    if (name == "bipartite") return Family::bipartite;
    if (name == "random") return Family::random;
    throw Error(Errc::BadFamily, "unknown family '" + std::string(name) + "'");
}

inline constexpr std::string_view family_name(Family f) {
    switch (f) {
    case Family::complete: return "complete";
    case Family::complete_loops: return "complete_loops";
    case Family::bipartite: return "bipartite";
    case Family::random: return "random";
    }
    return "complete";
}

/// Families whose reference value is a loop hafnian.
inline constexpr bool family_uses_loops(Family f) { return f == Family::complete_loops; }

/// Name of the generator behind the random family.
inline constexpr std::string_view random_generator_name = "mt19937_64";

/// Uniform double in [-1, 1) from the top 53 bits of a 64-bit draw.
inline double uniform_pm1(std::mt19937_64& rng) {
    return 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0;
}

inline ComplexSymmetricMatrix generate(Family family, std::size_t n, std::uint64_t seed = 0) {
    if (n % 2 != 0) throw Error(Errc::OddDimension, "benchmark matrices need an even dimension");
    CMatrix m(n, n);
    switch (family) {
    case Family::complete:
    case Family::complete_loops:
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                m(i, j) = (i != j || family == Family::complete_loops) ? 1.0 : 0.0;
        break;
    case Family::bipartite: {
        const std::size_t h = n / 2;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) = ((i < h) != (j < h)) ? 1.0 : 0.0;
        break;
    }
    case Family::random: {
        std::mt19937_64 rng(seed);
        for (auto& x : m.data()) {
            const double re = uniform_pm1(rng);
            x = cplx(re, uniform_pm1(rng));
        }
        return validate_or_symmetrize(std::move(m), SymmetryMode::automatic);
    }
    }
    return ComplexSymmetricMatrix::from_upper(std::move(m));
}

/// Exact value for the analytic families; empty for random matrices.
inline std::optional<BigInt> reference_value(Family family, std::size_t n) {
    const auto k = static_cast<long>(n);
    switch (family) {
    case Family::complete: return double_factorial(k - 1);
    case Family::complete_loops: return telephone(k);
    case Family::bipartite: return factorial(k / 2);
    case Family::random: return std::nullopt;
    }
    return std::nullopt;
}

struct PercentError {
    /// 100 * (Re(numerical / exact) - 1)
    double signed_real;
    /// 100 * |numerical / exact - 1|
    double magnitude;
};

inline PercentError percent_error(cplx numerical, cplx exact) {
    if (exact == cplx{}) throw Error(Errc::DivisionByZeroReference, "reference value is zero");
    const cplx ratio = numerical / exact;
    return {(ratio.real() - 1.0) * 100.0, std::abs(ratio - 1.0) * 100.0};
}

inline PercentError percent_error(cplx numerical, const BigInt& exact) {
    return percent_error(numerical, cplx(exact.convert_to<double>()));
}

inline double log10_magnitude(cplx z) { return std::log10(std::abs(z)); }

struct BenchmarkRecord {
    Family family = Family::complete;
    std::size_t n = 0;
    unsigned threads = 1;
    TraceBackend backend = TraceBackend::spectral;
    ReductionMode mode = ReductionMode::deterministic;
    unsigned repetition = 0;
    double wall_seconds = 0.0;
    cplx result;
    std::optional<BigInt> reference;
    std::optional<PercentError> error;
};

inline constexpr std::string_view csv_header =
    "family,n,threads,backend,mode,repetition,wall_seconds,result_re,result_im,reference,percent_error_re,"
    "percent_error_abs";

inline std::string to_csv_row(const BenchmarkRecord& r) {
    std::ostringstream os;
    os.precision(17);
    os << family_name(r.family) << ',' << r.n << ',' << r.threads << ',' << backend_name(r.backend) << ','
       << reduction_name(r.mode) << ',' << r.repetition << ',' << r.wall_seconds << ',' << r.result.real() << ','
       << r.result.imag() << ',';
    if (r.reference) os << *r.reference;
    os << ',';
    if (r.error) os << r.error->signed_real << ',' << r.error->magnitude;
    else os << ',';
    return os.str();
}

/// Times one engine call on a generated matrix; generation is excluded.
inline BenchmarkRecord run_point(Family family, std::size_t n, const EngineOptions& base, unsigned repetition,
                                 std::uint64_t seed) {
    const auto a = generate(family, n, seed);
    EngineOptions opts = base;
    opts.include_loops = family_uses_loops(family);
    BenchmarkRecord rec;
    rec.family = family;
    rec.n = n;
    rec.threads = opts.threads;
    rec.backend = opts.backend;
    rec.mode = opts.reduction;
    rec.repetition = repetition;
    const auto t0 = std::chrono::steady_clock::now();
    rec.result = hafnian(a, opts);
    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rec.reference = reference_value(family, n);
    if (rec.reference) rec.error = percent_error(rec.result, *rec.reference);
    return rec;
}

struct SweepConfig {
    Family family = Family::complete;
    std::size_t n_min = 8;
    std::size_t n_max = 16;
    std::size_t step = 2;
    EngineOptions engine;
    unsigned repetitions = 1;
    std::uint64_t seed = 0;
    /// Wall-clock budget for the whole sweep; <= 0 disables the check.
    double budget_seconds = 0.0;
};

struct SweepResult {
    std::vector<BenchmarkRecord> records;
    bool budget_exceeded = false;
};

/// One record per (n, repetition). Points are run sequentially. Before each
/// point the cost is extrapolated from the previous one as
/// t * 2^(step/2) * ((n+step)/n)^3; points that would overrun the budget are
/// skipped and the result is flagged. `on_record` sees each record as soon
/// as it exists, so a partial CSV is always valid.
inline SweepResult sweep(const SweepConfig& cfg,
                         const std::function<void(const BenchmarkRecord&)>& on_record = {}) {
    if (cfg.step == 0 || cfg.step % 2 != 0) throw Error(Errc::OutOfRange, "sweep step must be a positive even number");
    if (cfg.n_min % 2 != 0) throw Error(Errc::OddDimension, "sweep start must be even");
    SweepResult out;
    const auto start = std::chrono::steady_clock::now();
    double last = 0.0;
    std::size_t last_n = 0;
    for (std::size_t n = cfg.n_min; n <= cfg.n_max; n += cfg.step) {
        for (unsigned rep = 0; rep < cfg.repetitions; ++rep) {
            if (cfg.budget_seconds > 0.0) {
                const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
                double predicted = 0.0;
                if (last_n != 0 && last_n != n) {
                    const double ratio = static_cast<double>(n) / static_cast<double>(last_n);
                    predicted = last * std::exp2(0.5 * static_cast<double>(n - last_n)) * ratio * ratio * ratio;
                } else if (last_n == n) {
                    predicted = last;
                }
                if (elapsed + predicted > cfg.budget_seconds) {
                    out.budget_exceeded = true;
                    return out;
                }
            }
            auto rec = run_point(cfg.family, n, cfg.engine, rep, cfg.seed + rep);
            last = rec.wall_seconds;
            last_n = n;
            if (on_record) on_record(rec);
            out.records.push_back(std::move(rec));
        }
    }
    return out;
}

/// Median wall time per n.
inline std::map<std::size_t, double> median_wall_seconds(const std::vector<BenchmarkRecord>& records) {
    std::map<std::size_t, std::vector<double>> by_n;
    for (const auto& r : records) by_n[r.n].push_back(r.wall_seconds);
    std::map<std::size_t, double> out;
    for (auto& [n, v] : by_n) {
        std::sort(v.begin(), v.end());
        const std::size_t h = v.size() / 2;
        out[n] = v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
    }
    return out;
}

struct TimingPoint {
    double n;
    double seconds;
};

/// t = a * n^b * 2^(c n), fitted on log2 t.
struct ScalingFit {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    /// Root-mean-square residual of log2 t.
    double residual = 0.0;
    double r_squared = 0.0;
    std::size_t points = 0;
};

inline ScalingFit fit_scaling(const std::vector<TimingPoint>& data, double n_threshold) {
    std::vector<TimingPoint> pts;
    for (const auto& p : data)
        if (p.n > n_threshold && p.seconds > 0.0) pts.push_back(p);
    std::vector<double> distinct;
    for (const auto& p : pts) distinct.push_back(p.n);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (pts.size() < 5 || distinct.size() < 3)
        throw Error(Errc::InsufficientData, "need at least 5 timings over 3 sizes above n = " +
                                                std::to_string(n_threshold) + ", have " + std::to_string(pts.size()));
    Eigen::MatrixXd design(pts.size(), 3);
    Eigen::VectorXd y(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        design(row, 0) = 1.0;
        design(row, 1) = std::log2(pts[i].n);
        design(row, 2) = pts[i].n;
        y(row) = std::log2(pts[i].seconds);
    }
    const Eigen::Vector3d coef = design.colPivHouseholderQr().solve(y);
    const Eigen::VectorXd resid = y - design * coef;
    const double ss_res = resid.squaredNorm();
    const double ss_tot = (y.array() - y.mean()).square().sum();
    ScalingFit fit;
    fit.a = std::exp2(coef(0));
    fit.b = coef(1);
    fit.c = coef(2);
    fit.residual = std::sqrt(ss_res / static_cast<double>(pts.size()));
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    fit.points = pts.size();
    return fit;
}

inline std::vector<TimingPoint> timing_points(const std::vector<BenchmarkRecord>& records) {
    std::vector<TimingPoint> out;
    for (const auto& r : records) out.push_back({static_cast<double>(r.n), r.wall_seconds});
    return out;
}

/// Reads (n, wall_seconds) from a sweep CSV; '#' lines are skipped.
inline std::vector<TimingPoint> read_timing_csv(std::istream& is) {
    std::string line;
    std::size_t line_no = 0;
    int n_col = -1, t_col = -1;
    std::vector<TimingPoint> out;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (n_col < 0) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (cells[i] == "n") n_col = static_cast<int>(i);
                if (cells[i] == "wall_seconds") t_col = static_cast<int>(i);
            }
            if (n_col < 0 || t_col < 0) throw ParseError("CSV header lacks n or wall_seconds", line_no);
            continue;
        }
        const auto need = static_cast<std::size_t>(std::max(n_col, t_col));
        if (cells.size() <= need) throw ParseError("short CSV row", line_no);
        try {
            out.push_back({std::stod(cells[static_cast<std::size_t>(n_col)]),
                           std::stod(cells[static_cast<std::size_t>(t_col)])});
        } catch (const std::exception&) {
            throw ParseError("non-numeric n or wall_seconds", line_no);
        }
    }
    return out;
}

/// Strong scaling: fixed n, one record per thread count.
inline std::vector<BenchmarkRecord> thread_scaling(Family family, std::size_t n, const std::vector<unsigned>& threads,
                                                   EngineOptions base = {}, std::uint64_t seed = 0,
                                                   const std::function<void(const BenchmarkRecord&)>& on_record = {}) {
    std::vector<BenchmarkRecord> out;
    for (unsigned t : threads) {
        base.threads = t;
        auto rec = run_point(family, n, base, 0, seed);
        if (on_record) on_record(rec);
        out.push_back(std::move(rec));
    }
    return out;
}

/// Weak scaling: (n, threads) -> (n + 2, 2 * threads) for `steps` points,
/// which keeps the work per thread constant.
inline std::vector<BenchmarkRecord> weak_scaling(Family family, std::size_t n0, unsigned threads0, unsigned steps,
                                                 EngineOptions base = {}, std::uint64_t seed = 0,
                                                 const std::function<void(const BenchmarkRecord&)>& on_record = {}) {
    std::vector<BenchmarkRecord> out;
    std::size_t n = n0;
    unsigned t = threads0;
    for (unsigned s = 0; s < steps; ++s, n += 2, t *= 2) {
        base.threads = t;
        auto rec = run_point(family, n, base, 0, seed);
        if (on_record) on_record(rec);
        out.push_back(std::move(rec));
    }
    return out;
}

} // namespace hafnium
