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

#include <algorithm>
#include <cmath>
#include <random>

#include "hafnium/hafnium.hpp"

namespace hafnium::test {

inline cplx random_complex(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double re = u(rng);
    return {re, u(rng)};
}

inline CMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
    CMatrix m(rows, cols);
    for (auto& x : m.data()) x = random_complex(rng);
    return m;
}

inline ComplexSymmetricMatrix random_symmetric(std::size_t n, std::mt19937_64& rng) {
    return ComplexSymmetricMatrix::from_upper(random_matrix(n, n, rng));
}

/// |got - want| / |want|, or the absolute difference when want == 0.
inline double rel_err(cplx got, cplx want) {
    const double d = std::abs(got - want);
    const double w = std::abs(want);
    return w == 0.0 ? d : d / w;
}

inline CMatrix ones(std::size_t rows, std::size_t cols) { return CMatrix(rows, cols, cplx(1.0)); }

} // namespace hafnium::test
