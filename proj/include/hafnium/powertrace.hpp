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

// Power traces tr(B^k), k = 1..K, of a general complex square matrix.
//
// Both backends start from the same upper Hessenberg form, obtained by
// elementary similarity transforms with partial pivoting. The spectral
// backend then triangularizes with single-shift QR and sums eigenvalue
// powers. The charpoly backend expands the characteristic polynomial
// along the Hessenberg leading minors and turns its coefficients into
// power sums with Newton's identities, continuing past the matrix size
// with the Cayley-Hamilton recurrence.

#pragma once

#include <cfloat>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "hafnium/error.hpp"
#include "hafnium/matrix.hpp"

#ifdef HAFNIUM_COUNT_OPS
#define HAFNIUM_OPS(n) (::hafnium::detail::op_count += static_cast<std::uint64_t>(n))
#else
#define HAFNIUM_OPS(n) ((void)0)
#endif

namespace hafnium {

namespace detail {
/// Scalar multiply-adds performed on this thread; only advanced when
/// HAFNIUM_COUNT_OPS is defined.
inline thread_local std::uint64_t op_count = 0;
} // namespace detail

inline std::uint64_t operation_count() noexcept { return detail::op_count; }
inline void reset_operation_count() noexcept { detail::op_count = 0; }

enum class TraceBackend { spectral, charpoly };

inline TraceBackend parse_backend(std::string_view name) {
    if (name == "spectral") return TraceBackend::spectral;
    if (name == "charpoly") return TraceBackend::charpoly;
    throw Error(Errc::OutOfRange, "unknown backend '" + std::string(name) + "'");
}

inline constexpr std::string_view backend_name(TraceBackend b) {
    return b == TraceBackend::spectral ? "spectral" : "charpoly";
}

/// values[k-1] == tr(B^k).
using PowerTraceVector = std::vector<cplx>;

/// Coefficients c_0..c_{k-1} of the monic x^k + sum_j c_j x^j.
using CharPolyCoeffs = std::vector<cplx>;

/// Subdiagonal deflation threshold relative to the neighbouring diagonal.
inline constexpr double qr_deflation_tolerance = 1e-14;
/// QR sweeps allowed per unit of matrix size.
inline constexpr int qr_sweeps_per_row = 30;

namespace detail {

inline double abs1(const cplx& z) noexcept { return std::abs(z.real()) + std::abs(z.imag()); }

/// Row-major n x n view over a scratch buffer.
struct SquareView {
    cplx* p;
    std::size_t n;
    cplx& operator()(std::size_t i, std::size_t j) const noexcept { return p[i * n + j]; }
};

inline void reduce_to_hessenberg(SquareView h) {
    const std::size_t n = h.n;
    if (n < 3) return;
    for (std::size_t m = 1; m + 1 < n; ++m) {
        std::size_t piv = m;
        double best = abs1(h(m, m - 1));
        for (std::size_t i = m + 1; i < n; ++i) {
            const double a = abs1(h(i, m - 1));
            if (a > best) {
                best = a;
                piv = i;
            }
        }
        if (piv != m) {
            for (std::size_t j = m - 1; j < n; ++j) std::swap(h(piv, j), h(m, j));
            for (std::size_t r = 0; r < n; ++r) std::swap(h(r, piv), h(r, m));
        }
        if (best == 0.0) continue;
        const cplx pivot = h(m, m - 1);
        for (std::size_t i = m + 1; i < n; ++i) {
            cplx y = h(i, m - 1);
            if (y == cplx{}) continue;
            y /= pivot;
            h(i, m - 1) = cplx{};
            for (std::size_t j = m; j < n; ++j) h(i, j) -= y * h(m, j);
            for (std::size_t r = 0; r < n; ++r) h(r, m) += y * h(r, i);
            HAFNIUM_OPS(2 * n - m);
        }
    }
}

inline std::pair<cplx, cplx> eigenvalues_2x2(cplx a, cplx b, cplx c, cplx d) {
    const cplx mean = 0.5 * (a + d);
    const cplx half = 0.5 * (a - d);
    const cplx disc = std::sqrt(half * half + b * c);
    return {mean + disc, mean - disc};
}

struct Givens {
    double c;
    cplx s;
    cplx r;
};

inline Givens make_givens(cplx x, cplx y) {
    if (y == cplx{}) return {1.0, cplx{}, x};
    if (x == cplx{}) {
        const double ay = std::abs(y);
        return {0.0, std::conj(y) / ay, cplx(ay)};
    }
    const double ax = std::abs(x);
    const double nrm = std::hypot(ax, std::abs(y));
    const cplx phase = x / ax;
    return {ax / nrm, phase * std::conj(y) / nrm, phase * nrm};
}

/// Eigenvalues of an upper Hessenberg matrix by single-shift QR with
/// Wilkinson shifts. Destroys h.
inline void hessenberg_eigenvalues(SquareView h, std::span<cplx> eig) {
    const auto n = static_cast<std::ptrdiff_t>(h.n);
    const double small = DBL_MIN * static_cast<double>(n > 0 ? n : 1) / DBL_EPSILON;
    const long cap = static_cast<long>(qr_sweeps_per_row) * n;
    long total = 0;
    int its = 0;
    std::ptrdiff_t hi = n - 1;
    while (hi >= 0) {
        std::ptrdiff_t l = hi;
        for (; l > 0; --l) {
            const double sub = abs1(h(l, l - 1));
            const double diag = abs1(h(l, l)) + abs1(h(l - 1, l - 1));
            if (sub <= std::max(qr_deflation_tolerance * diag, small)) {
                h(l, l - 1) = cplx{};
                break;
            }
        }
        if (l == hi) {
            eig[hi] = h(hi, hi);
            --hi;
            its = 0;
            continue;
        }
        if (l == hi - 1) {
            auto [e1, e2] = eigenvalues_2x2(h(l, l), h(l, hi), h(hi, l), h(hi, hi));
            eig[l] = e1;
            eig[hi] = e2;
            hi -= 2;
            its = 0;
            continue;
        }
        if (total >= cap)
            throw Error(Errc::EigensolverNoConvergence,
                        "QR iteration exceeded " + std::to_string(cap) + " sweeps on a " + std::to_string(n) +
                            "x" + std::to_string(n) + " matrix");

        cplx shift;
        if (its == 10) {
            shift = h(l, l) + 0.75 * std::abs(h(l + 1, l).real());
        } else if (its == 20) {
            shift = h(hi, hi) + 0.75 * std::abs(h(hi, hi - 1).real());
        } else {
            auto [e1, e2] = eigenvalues_2x2(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
            shift = abs1(e1 - h(hi, hi)) <= abs1(e2 - h(hi, hi)) ? e1 : e2;
        }

        cplx x = h(l, l) - shift;
        cplx y = h(l + 1, l);
        for (std::ptrdiff_t k = l; k < hi; ++k) {
            if (k > l) {
                x = h(k, k - 1);
                y = h(k + 1, k - 1);
            }
            const Givens g = make_givens(x, y);
            if (k > l) {
                h(k, k - 1) = g.r;
                h(k + 1, k - 1) = cplx{};
            }
            for (std::ptrdiff_t j = k; j <= hi; ++j) {
                const cplx t1 = h(k, j);
                const cplx t2 = h(k + 1, j);
                h(k, j) = g.c * t1 + g.s * t2;
                h(k + 1, j) = -std::conj(g.s) * t1 + g.c * t2;
            }
            const std::ptrdiff_t last = std::min(k + 2, hi);
            for (std::ptrdiff_t r = l; r <= last; ++r) {
                const cplx t1 = h(r, k);
                const cplx t2 = h(r, k + 1);
                h(r, k) = g.c * t1 + std::conj(g.s) * t2;
                h(r, k + 1) = -g.s * t1 + g.c * t2;
            }
            HAFNIUM_OPS(2 * (hi - k + 1) + 2 * (last - l + 1));
        }
        ++its;
        ++total;
    }
}

/// Characteristic polynomial of an upper Hessenberg matrix from the
/// leading-minor recurrence
///   p_k = (x - h_kk) p_{k-1} - sum_{i<k} h_ik (h_{i+1,i} ... h_{k,k-1}) p_{i-1}.
/// `poly` receives c_0..c_{n-1}; `scratch` holds the triangle of minors.
inline void hessenberg_charpoly(SquareView h, std::vector<cplx>& scratch, std::span<cplx> poly) {
    const std::size_t n = h.n;
    // Row k of the triangle (k + 1 coefficients of p_k) starts at k(k+1)/2.
    scratch.assign((n + 1) * (n + 2) / 2, cplx{});
    auto minor = [&](std::size_t k) { return scratch.data() + k * (k + 1) / 2; };
    minor(0)[0] = 1.0;
    for (std::size_t k = 1; k <= n; ++k) {
        cplx* pk = minor(k);
        const cplx* prev = minor(k - 1);
        const cplx diag = h(k - 1, k - 1);
        pk[k] = prev[k - 1];
        for (std::size_t d = k - 1; d >= 1; --d) pk[d] = prev[d - 1] - diag * prev[d];
        pk[0] = -diag * prev[0];
        HAFNIUM_OPS(k);
        cplx chain = 1.0;
        for (std::size_t i = k - 1; i >= 1; --i) {
            chain *= h(i, i - 1);
            if (chain == cplx{}) break;
            const cplx w = h(i - 1, k - 1) * chain;
            const cplx* pi = minor(i - 1);
            for (std::size_t d = 0; d < i; ++d) pk[d] -= w * pi[d];
            HAFNIUM_OPS(i + 1);
        }
    }
    const cplx* pn = minor(n);
    for (std::size_t j = 0; j < n; ++j) {
        if (!std::isfinite(pn[j].real()) || !std::isfinite(pn[j].imag()))
            throw Error(Errc::DegenerateHessenberg,
                        "characteristic polynomial coefficient " + std::to_string(j) + " is not finite");
        poly[j] = pn[j];
    }
}

/// Power sums t_1..t_K from the monic coefficients c_0..c_{n-1}.
inline void traces_from_charpoly(std::span<const cplx> c, std::span<cplx> traces) {
    const std::size_t n = c.size();
    const std::size_t kmax = traces.size();
    for (std::size_t k = 1; k <= kmax; ++k) {
        cplx t{};
        if (k <= n) {
            t = -static_cast<double>(k) * c[n - k];
            for (std::size_t i = 1; i < k; ++i) t -= c[n - i] * traces[k - i - 1];
            HAFNIUM_OPS(k);
        } else {
            for (std::size_t j = 0; j < n; ++j) t -= c[j] * traces[k - n + j - 1];
            HAFNIUM_OPS(n);
        }
        traces[k - 1] = t;
    }
}

inline void traces_from_eigenvalues(std::span<const cplx> eig, std::span<cplx> traces) {
    std::fill(traces.begin(), traces.end(), cplx{});
    for (const cplx& lambda : eig) {
        cplx p = lambda;
        for (auto& t : traces) {
            t += p;
            p *= lambda;
        }
    }
    HAFNIUM_OPS(eig.size() * traces.size());
}

} // namespace detail

/// Reusable scratch for repeated power-trace evaluations; one per thread.
class PowerTraceWorkspace {
public:
    /// Power traces of the n x n row-major matrix in `b`, written to `traces`.
    /// `b` is overwritten.
    void compute_inplace(std::span<cplx> b, std::size_t n, TraceBackend backend, std::span<cplx> traces) {
        if (b.size() != n * n) throw Error(Errc::DimensionMismatch, "buffer does not hold an n x n matrix");
        if (n == 0) {
            std::fill(traces.begin(), traces.end(), cplx{});
            return;
        }
        detail::SquareView h{b.data(), n};
        detail::reduce_to_hessenberg(h);
        buf_.resize(n);
        if (backend == TraceBackend::spectral) {
            detail::hessenberg_eigenvalues(h, buf_);
            detail::traces_from_eigenvalues(buf_, traces);
        } else {
            detail::hessenberg_charpoly(h, minors_, buf_);
            detail::traces_from_charpoly(buf_, traces);
        }
    }

private:
    std::vector<cplx> buf_;
    std::vector<cplx> minors_;
};

inline PowerTraceVector power_traces(const CMatrix& b, std::size_t k, TraceBackend backend) {
    if (!b.is_square()) throw Error(Errc::NonSquare, "power traces need a square matrix");
    if (k == 0) throw Error(Errc::OutOfRange, "trace order must be at least 1");
    std::vector<cplx> work(b.data().begin(), b.data().end());
    PowerTraceVector out(k);
    PowerTraceWorkspace ws;
    ws.compute_inplace(work, b.rows(), backend, out);
    return out;
}

inline PowerTraceVector power_traces_spectral(const CMatrix& b, std::size_t k) {
    return power_traces(b, k, TraceBackend::spectral);
}

inline PowerTraceVector power_traces_charpoly(const CMatrix& b, std::size_t k) {
    return power_traces(b, k, TraceBackend::charpoly);
}

/// Eigenvalues of a general complex square matrix (spectral backend's
/// intermediate), in no particular order.
inline std::vector<cplx> eigenvalues(const CMatrix& b) {
    if (!b.is_square()) throw Error(Errc::NonSquare, "eigenvalues need a square matrix");
    std::vector<cplx> work(b.data().begin(), b.data().end());
    std::vector<cplx> eig(b.rows());
    detail::SquareView h{work.data(), b.rows()};
    detail::reduce_to_hessenberg(h);
    detail::hessenberg_eigenvalues(h, eig);
    return eig;
}

inline CharPolyCoeffs characteristic_polynomial(const CMatrix& b) {
    if (!b.is_square()) throw Error(Errc::NonSquare, "characteristic polynomial needs a square matrix");
    std::vector<cplx> work(b.data().begin(), b.data().end());
    detail::SquareView h{work.data(), b.rows()};
    detail::reduce_to_hessenberg(h);
    std::vector<cplx> minors;
    CharPolyCoeffs c(b.rows());
    detail::hessenberg_charpoly(h, minors, c);
    return c;
}

} // namespace hafnium
