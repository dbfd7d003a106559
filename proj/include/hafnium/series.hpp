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

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "hafnium/matrix.hpp"

namespace hafnium {

/// Univariate polynomial in lambda with every degree above `degree()` discarded.
class TruncatedPolynomial {
public:
    explicit TruncatedPolynomial(std::size_t degree) : c_(degree + 1) {}
    TruncatedPolynomial(std::size_t degree, std::span<const cplx> coeffs) : c_(degree + 1) {
        for (std::size_t i = 0; i < coeffs.size() && i <= degree; ++i) c_[i] = coeffs[i];
    }

    std::size_t degree() const noexcept { return c_.size() - 1; }
    cplx& operator[](std::size_t d) noexcept { return c_[d]; }
    const cplx& operator[](std::size_t d) const noexcept { return c_[d]; }
    std::span<const cplx> coeffs() const noexcept { return c_; }
    std::span<cplx> coeffs() noexcept { return c_; }

    friend TruncatedPolynomial operator*(const TruncatedPolynomial& a, const TruncatedPolynomial& b) {
        const std::size_t deg = std::min(a.degree(), b.degree());
        TruncatedPolynomial r(deg);
        for (std::size_t i = 0; i <= deg; ++i) {
            if (a[i] == cplx{}) continue;
            for (std::size_t j = 0; i + j <= deg; ++j) r[i + j] += a[i] * b[j];
        }
        return r;
    }

    friend TruncatedPolynomial operator+(TruncatedPolynomial a, const TruncatedPolynomial& b) {
        for (std::size_t i = 0; i <= std::min(a.degree(), b.degree()); ++i) a[i] += b[i];
        return a;
    }

    friend bool operator==(const TruncatedPolynomial&, const TruncatedPolynomial&) = default;

private:
    std::vector<cplx> c_;
};

namespace detail {

// s_k = t_k / (2k) + loop_k / 2 for k = 1..D; s_0 = 0.
inline void inner_series(std::span<const cplx> traces, const cplx* loops, std::span<cplx> s) {
    s[0] = cplx{};
    for (std::size_t k = 1; k <= traces.size(); ++k) {
        cplx v = traces[k - 1] / (2.0 * static_cast<double>(k));
        if (loops) v += 0.5 * loops[k - 1];
        s[k] = v;
    }
}

// Coefficient of lambda^D in exp(s) with s_0 = 0, via the recurrence
// k e_k = sum_{j=1..k} j s_j e_{k-j} that follows from e' = s' e.
inline cplx exp_top_coefficient(std::span<const cplx> s, std::span<cplx> e) {
    const std::size_t deg = s.size() - 1;
    if (deg == 0) return cplx{};
    e[0] = 1.0;
    for (std::size_t k = 1; k <= deg; ++k) {
        cplx acc{};
        for (std::size_t j = 1; j <= k; ++j) acc += static_cast<double>(j) * s[j] * e[k - j];
        e[k] = acc / static_cast<double>(k);
    }
    return e[deg];
}

} // namespace detail

/// Series s(lambda) with s_k = tr(B^k)/(2k), plus loop_terms[k-1]/2 when
/// loop terms are supplied. The truncation degree equals traces.size().
inline TruncatedPolynomial inner_series(std::span<const cplx> traces,
                                        std::optional<std::span<const cplx>> loop_terms = std::nullopt) {
    if (loop_terms && loop_terms->size() != traces.size())
        throw Error(Errc::LengthMismatch, "loop terms have length " + std::to_string(loop_terms->size()) +
                                              ", traces have length " + std::to_string(traces.size()));
    TruncatedPolynomial s(traces.size());
    detail::inner_series(traces, loop_terms ? loop_terms->data() : nullptr, s.coeffs());
    return s;
}

/// [lambda^D] of sum_{j=1..D} s^j / j!, where D is the truncation degree.
/// Requires s_0 == 0.
inline cplx exp_coefficient(const TruncatedPolynomial& s) {
    if (s[0] != cplx{}) throw Error(Errc::OutOfRange, "series must have a zero constant term");
    std::vector<cplx> e(s.degree() + 1);
    return detail::exp_top_coefficient(s.coeffs(), e);
}

} // namespace hafnium
