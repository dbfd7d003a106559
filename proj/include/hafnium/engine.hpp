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

// Hafnian and loop hafnian by inclusion-exclusion over vertex pairs.
//
// With X the block-diagonal pair exchange and B_Z the rows/columns of X*A
// selected by a pair subset Z (|Z| = m), every subset contributes
//
//   (-1)^(n/2 - m) [lambda^(n/2)] exp( sum_k (tr(B_Z^k)/(2k) + l_k/2) lambda^k )
//
// where l_k = v B_Z^(k-1) X v^T carries the loop weights v = diag(A_Z) and
// vanishes for the plain hafnian. Only degrees up to n/2 of the series are
// kept. The empty subset contributes nothing and is skipped.

#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdint>
#include <exception>
#include <mutex>
#include <span>
#include <string_view>
#include <thread>
#include <vector>

#include "hafnium/matrix.hpp"
#include "hafnium/powertrace.hpp"
#include "hafnium/series.hpp"

namespace hafnium {

enum class ReductionMode { deterministic, fast };

inline ReductionMode parse_reduction(std::string_view name) {
    if (name == "deterministic") return ReductionMode::deterministic;
    if (name == "fast") return ReductionMode::fast;
    throw Error(Errc::OutOfRange, "unknown reduction mode '" + std::string(name) + "'");
}

inline constexpr std::string_view reduction_name(ReductionMode m) {
    return m == ReductionMode::deterministic ? "deterministic" : "fast";
}

struct EngineOptions {
    TraceBackend backend = TraceBackend::spectral;
    unsigned threads = 1;
    ReductionMode reduction = ReductionMode::deterministic;
    bool include_loops = false;
};

/// Largest supported matrix dimension: pair masks must fit in 64 bits.
inline constexpr std::size_t max_engine_dimension = 124;

/// Entry k (1-based) is v * B^(k-1) * X * v^T, where B is the pair-swapped
/// submatrix and X exchanges entries 2i and 2i+1 of v.
inline std::vector<cplx> loop_correction_vector(const CMatrix& b, std::span<const cplx> v, std::size_t k) {
    if (!b.is_square() || v.size() != b.rows() || v.size() % 2 != 0)
        throw Error(Errc::DimensionMismatch, "loop vector length " + std::to_string(v.size()) +
                                                 " does not match a " + std::to_string(b.rows()) + "x" +
                                                 std::to_string(b.cols()) + " matrix");
    const std::size_t n = v.size();
    std::vector<cplx> u(n), next(n), out(k);
    for (std::size_t i = 0; i < n; ++i) u[i] = v[i ^ 1u];
    for (std::size_t step = 0; step < k; ++step) {
        cplx dot{};
        for (std::size_t i = 0; i < n; ++i) dot += v[i] * u[i];
        out[step] = dot;
        if (step + 1 == k) break;
        for (std::size_t r = 0; r < n; ++r) {
            cplx acc{};
            for (std::size_t c = 0; c < n; ++c) acc += b(r, c) * u[c];
            next[r] = acc;
        }
        std::swap(u, next);
    }
    return out;
}

/// Evaluates signed subset terms for one matrix. Owns its scratch buffers,
/// so each worker thread needs its own instance.
class SubsetEvaluator {
public:
    SubsetEvaluator(const ComplexSymmetricMatrix& a, TraceBackend backend, bool loops)
        : a_(a),
          swapped_(pair_swap(split_diag_offdiag(a).off_diagonal.matrix())),
          backend_(backend),
          loops_(loops),
          half_(a.size() / 2) {
        const std::size_t n = a.size();
        sub_.reserve(n * n);
        idx_.reserve(n);
        traces_.resize(half_);
        lterms_.resize(half_);
        series_.resize(half_ + 1);
        exps_.resize(half_ + 1);
        v_.reserve(n);
        u_.resize(n);
        next_.resize(n);
    }

    cplx operator()(std::uint64_t mask) {
        if (mask == 0) return cplx{};
        idx_.clear();
        for (std::uint64_t m = mask; m != 0; m &= m - 1) {
            const auto i = static_cast<std::size_t>(std::countr_zero(m));
            idx_.push_back(2 * i);
            idx_.push_back(2 * i + 1);
        }
        const std::size_t dim = idx_.size();
        sub_.resize(dim * dim);
        for (std::size_t r = 0; r < dim; ++r) {
            const auto src = swapped_.row(idx_[r]);
            cplx* dst = sub_.data() + r * dim;
            for (std::size_t c = 0; c < dim; ++c) dst[c] = src[idx_[c]];
        }
        const cplx* loop_ptr = nullptr;
        if (loops_) {
            compute_loop_terms(dim);
            loop_ptr = lterms_.data();
        }
        ws_.compute_inplace(sub_, dim, backend_, traces_);
        detail::inner_series(traces_, loop_ptr, series_);
        const cplx coeff = detail::exp_top_coefficient(series_, exps_);
        HAFNIUM_OPS(half_ * half_);
        return ((half_ - dim / 2) % 2 == 0) ? coeff : -coeff;
    }

private:
    void compute_loop_terms(std::size_t dim) {
        v_.resize(dim);
        for (std::size_t i = 0; i < dim; ++i) v_[i] = a_(idx_[i], idx_[i]);
        for (std::size_t i = 0; i < dim; ++i) u_[i] = v_[i ^ 1u];
        for (std::size_t k = 0; k < half_; ++k) {
            cplx dot{};
            for (std::size_t i = 0; i < dim; ++i) dot += v_[i] * u_[i];
            lterms_[k] = dot;
            if (k + 1 == half_) break;
            for (std::size_t r = 0; r < dim; ++r) {
                const cplx* row = sub_.data() + r * dim;
                cplx acc{};
                for (std::size_t c = 0; c < dim; ++c) acc += row[c] * u_[c];
                next_[r] = acc;
            }
            std::swap(u_, next_);
        }
        HAFNIUM_OPS(half_ * dim * (dim + 1));
    }

    const ComplexSymmetricMatrix& a_;
    CMatrix swapped_;
    TraceBackend backend_;
    bool loops_;
    std::size_t half_;
    std::vector<cplx> sub_;
    std::vector<std::size_t> idx_;
    std::vector<cplx> traces_, lterms_, series_, exps_;
    std::vector<cplx> v_, u_, next_;
    PowerTraceWorkspace ws_;
};

namespace detail {

inline void check_even(const ComplexSymmetricMatrix& a) {
    if (a.size() % 2 != 0)
        throw Error(Errc::OddDimension, "matrix dimension " + std::to_string(a.size()) + " is odd");
    if (a.size() > max_engine_dimension)
        throw Error(Errc::TooLarge, "matrix dimension " + std::to_string(a.size()) + " exceeds " +
                                        std::to_string(max_engine_dimension));
}

/// Kahan-Babuska (Neumaier) compensated accumulator; real and imaginary
/// parts are compensated separately. Partial accumulators merge without
/// dropping their compensation.
class KahanSum {
public:
    void add(cplx x) noexcept {
        re_.add(x.real());
        im_.add(x.imag());
    }
    void add(const KahanSum& other) noexcept {
        re_.add(other.re_.sum);
        im_.add(other.im_.sum);
        re_.add(other.re_.comp);
        im_.add(other.im_.comp);
    }
    cplx value() const noexcept { return {re_.sum + re_.comp, im_.sum + im_.comp}; }

private:
    struct Part {
        double sum = 0.0;
        double comp = 0.0;
        void add(double x) noexcept {
            const double t = sum + x;
            if (std::abs(sum) >= std::abs(x)) comp += (sum - t) + x;
            else comp += (x - t) + sum;
            sum = t;
        }
    };
    Part re_, im_;
};

/// Fixed pairwise tree over the accumulators.
inline KahanSum tree_sum(std::span<const KahanSum> v) {
    if (v.empty()) return {};
    if (v.size() == 1) return v[0];
    const std::size_t mid = v.size() / 2;
    KahanSum left = tree_sum(v.subspan(0, mid));
    left.add(tree_sum(v.subspan(mid)));
    return left;
}

} // namespace detail

/// Chunk layout over masks [0, mask_end). Depends only on mask_end, never on
/// the thread count, which is what makes deterministic mode reproducible.
struct ChunkLayout {
    std::uint64_t mask_end;
    std::uint64_t chunk_size;
    std::uint64_t chunks;

    static constexpr std::uint64_t max_chunks = 4096;

    static ChunkLayout for_masks(std::uint64_t mask_end) {
        const std::uint64_t span = std::bit_ceil(std::max<std::uint64_t>(mask_end, 1));
        const std::uint64_t size = std::max<std::uint64_t>(1, span / max_chunks);
        return {mask_end, size, (mask_end + size - 1) / size};
    }
    std::uint64_t begin(std::uint64_t c) const noexcept { return std::max<std::uint64_t>(1, c * chunk_size); }
    std::uint64_t end(std::uint64_t c) const noexcept { return std::min(mask_end, (c + 1) * chunk_size); }
};

/// Sums term(mask) over masks 1..mask_end-1. `make_term` is invoked once per
/// worker and must return a callable `cplx(std::uint64_t)`; each worker
/// walks chunks round-robin.
///
/// deterministic: compensated sum inside each fixed chunk, then a fixed
/// pairwise tree over the chunk accumulators; bit-identical for any thread
/// count.
/// fast: one compensated accumulator per worker, combined in worker order.
template <typename Factory>
cplx reduce_terms(std::uint64_t mask_end, ReductionMode mode, unsigned threads, Factory&& make_term) {
    if (threads == 0) throw Error(Errc::OutOfRange, "thread count must be at least 1");
    if (mask_end <= 1) return cplx{};
    const ChunkLayout layout = ChunkLayout::for_masks(mask_end);
    const auto workers = static_cast<unsigned>(std::min<std::uint64_t>(threads, layout.chunks));

    std::vector<detail::KahanSum> chunk_sums(mode == ReductionMode::deterministic ? layout.chunks : 0);
    std::vector<detail::KahanSum> worker_sums(workers);
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto run = [&](unsigned w) {
        try {
            auto term = make_term();
            for (std::uint64_t c = w; c < layout.chunks; c += workers) {
                if (failed.load(std::memory_order_relaxed)) return;
                detail::KahanSum& acc = mode == ReductionMode::deterministic ? chunk_sums[c] : worker_sums[w];
                for (std::uint64_t m = layout.begin(c); m < layout.end(c); ++m) acc.add(term(m));
            }
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            failed = true;
        }
    };

    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    }
    if (error) std::rethrow_exception(error);

    if (mode == ReductionMode::deterministic) return detail::tree_sum(chunk_sums).value();
    detail::KahanSum total;
    for (const auto& s : worker_sums) total.add(s);
    return total.value();
}

/// Deterministic-mode reduction of precomputed terms; terms[mask] holds the
/// term for that mask and terms[0] is ignored.
inline cplx sum_terms_deterministic(std::span<const cplx> terms) {
    return reduce_terms(terms.size(), ReductionMode::deterministic, 1,
                        [terms] { return [terms](std::uint64_t m) { return terms[m]; }; });
}

/// Number of evaluated subset terms for an n x n matrix: 2^(n/2) - 1.
inline std::uint64_t term_count(std::size_t n) {
    return n == 0 ? 0 : (std::uint64_t{1} << (n / 2)) - 1;
}

/// Signed contribution of one pair subset.
inline cplx subset_term(const ComplexSymmetricMatrix& a, PairSubset z, const EngineOptions& opts = {}) {
    detail::check_even(a);
    if (z.mask() >> (a.size() / 2) != 0) throw Error(Errc::OutOfRange, "pair subset exceeds matrix size");
    SubsetEvaluator eval(a, opts.backend, opts.include_loops);
    return eval(z.mask());
}

/// Hafnian (or loop hafnian when opts.include_loops) of a, summing all
/// 2^(n/2) - 1 nonempty subset terms. n = 0 gives 1.
inline cplx hafnian(const ComplexSymmetricMatrix& a, const EngineOptions& opts = {}) {
    detail::check_even(a);
    if (a.size() == 0) return cplx(1.0);
    const std::uint64_t mask_end = std::uint64_t{1} << (a.size() / 2);
    return reduce_terms(mask_end, opts.reduction, opts.threads,
                        [&] { return SubsetEvaluator(a, opts.backend, opts.include_loops); });
}

inline cplx loop_hafnian(const ComplexSymmetricMatrix& a, EngineOptions opts = {}) {
    opts.include_loops = true;
    return hafnian(a, opts);
}

} // namespace hafnium
