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
#include <bit>
#include <cassert>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "hafnium/error.hpp"

namespace hafnium {

using cplx = std::complex<double>;

/// Dense row-major matrix. Indices are 0-based.
template <typename T>
class Matrix {
public:
    using value_type = T;

    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, const T& fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    Matrix(std::initializer_list<std::initializer_list<T>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) throw Error(Errc::DimensionMismatch, "ragged initializer");
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) noexcept {
        assert(i < rows_ && j < cols_);
        return data_[i * cols_ + j];
    }
    const T& operator()(std::size_t i, std::size_t j) const noexcept {
        assert(i < rows_ && j < cols_);
        return data_[i * cols_ + j];
    }

    std::span<T> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
    std::span<const T> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }

    std::span<T> data() noexcept { return data_; }
    std::span<const T> data() const noexcept { return data_; }

    /// Reshape without preserving contents; reuses capacity.
    void resize(std::size_t rows, std::size_t cols) {
        rows_ = rows;
        cols_ = cols;
        data_.resize(rows * cols);
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using CMatrix = Matrix<cplx>;

template <typename T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.cols() != b.rows()) throw Error(Errc::DimensionMismatch, "matrix product");
    Matrix<T> c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const T aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

template <typename T, typename S>
Matrix<T> scaled(Matrix<T> m, const S& factor) {
    for (auto& x : m.data()) x *= factor;
    return m;
}

/// Largest entry magnitude; 0 for an empty matrix.
template <typename T>
double max_abs(const Matrix<T>& m) {
    double r = 0.0;
    for (const auto& x : m.data()) r = std::max(r, static_cast<double>(std::abs(x)));
    return r;
}

/// Bitmask over the n/2 vertex pairs; bit i selects the pair (2i, 2i+1).
class PairSubset {
public:
    constexpr PairSubset() = default;
    constexpr explicit PairSubset(std::uint64_t mask) : mask_(mask) {}

    static constexpr PairSubset full(std::size_t pairs) {
        return PairSubset(pairs >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << pairs) - 1);
    }

    constexpr std::uint64_t mask() const noexcept { return mask_; }
    constexpr std::size_t size() const noexcept { return static_cast<std::size_t>(std::popcount(mask_)); }
    constexpr bool empty() const noexcept { return mask_ == 0; }
    constexpr bool contains(std::size_t i) const noexcept { return i < 64 && ((mask_ >> i) & 1u); }

    /// Selected matrix indices {2i, 2i+1 : i in Z} in ascending order.
    std::vector<std::size_t> indices() const {
        std::vector<std::size_t> out;
        out.reserve(2 * size());
        for (std::uint64_t m = mask_; m != 0; m &= m - 1) {
            const auto i = static_cast<std::size_t>(std::countr_zero(m));
            out.push_back(2 * i);
            out.push_back(2 * i + 1);
        }
        return out;
    }

    friend constexpr bool operator==(PairSubset, PairSubset) = default;

private:
    std::uint64_t mask_ = 0;
};

/// Complex matrix whose entries satisfy a(i,j) == a(j,i) exactly.
/// Construct through validate_or_symmetrize or from_upper.
class ComplexSymmetricMatrix {
public:
    ComplexSymmetricMatrix() = default;

    std::size_t size() const noexcept { return m_.rows(); }
    const cplx& operator()(std::size_t i, std::size_t j) const noexcept { return m_(i, j); }
    const CMatrix& matrix() const noexcept { return m_; }

    /// Mirrors the upper triangle (diagonal included) onto the lower one.
    static ComplexSymmetricMatrix from_upper(CMatrix raw) {
        if (!raw.is_square()) throw Error(Errc::NonSquare, "matrix is not square");
        for (std::size_t i = 0; i < raw.rows(); ++i)
            for (std::size_t j = 0; j < i; ++j) raw(i, j) = raw(j, i);
        return ComplexSymmetricMatrix(std::move(raw));
    }

    friend bool operator==(const ComplexSymmetricMatrix&, const ComplexSymmetricMatrix&) = default;

private:
    explicit ComplexSymmetricMatrix(CMatrix m) : m_(std::move(m)) {}
    CMatrix m_;
};

enum class SymmetryMode { strict, automatic };

/// Relative tolerance applied in strict mode, scaled by max(1, max|raw|).
inline constexpr double symmetry_tolerance = 1e-12;

inline ComplexSymmetricMatrix validate_or_symmetrize(CMatrix raw, SymmetryMode mode = SymmetryMode::strict) {
    if (!raw.is_square()) throw Error(Errc::NonSquare, "matrix is not square");
    const std::size_t n = raw.rows();
    if (mode == SymmetryMode::automatic) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const cplx avg = (raw(i, j) + raw(j, i)) * 0.5;
                raw(i, j) = avg;
                raw(j, i) = avg;
            }
        return ComplexSymmetricMatrix::from_upper(std::move(raw));
    }
    const double tol = symmetry_tolerance * std::max(1.0, max_abs(raw));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dev = std::abs(raw(i, j) - raw(j, i));
            if (!(dev <= tol))
                throw Error(Errc::AsymmetricInput, "entry (" + std::to_string(i) + "," + std::to_string(j) +
                                                       ") deviates from its transpose by " + std::to_string(dev));
        }
    return ComplexSymmetricMatrix::from_upper(std::move(raw));
}

/// X*M: exchanges rows 2i and 2i+1 for every pair i.
template <typename T>
Matrix<T> pair_swap(const Matrix<T>& m) {
    if (m.rows() % 2 != 0) throw Error(Errc::OddDimension, "pair swap needs an even row count");
    Matrix<T> out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto src = m.row(i ^ 1u);
        std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return out;
}

inline CMatrix pair_swap(const ComplexSymmetricMatrix& a) { return pair_swap(a.matrix()); }

/// Square submatrix on rows/columns {2i, 2i+1 : i in z}, ascending.
template <typename T>
Matrix<T> pair_submatrix(const Matrix<T>& m, PairSubset z) {
    const auto idx = z.indices();
    for (auto i : idx)
        if (i >= m.rows() || i >= m.cols())
            throw Error(Errc::OutOfRange, "pair subset selects index " + std::to_string(i));
    Matrix<T> out(idx.size(), idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r)
        for (std::size_t c = 0; c < idx.size(); ++c) out(r, c) = m(idx[r], idx[c]);
    return out;
}

struct DiagonalSplit {
    std::vector<cplx> diagonal;
    ComplexSymmetricMatrix off_diagonal;
};

inline DiagonalSplit split_diag_offdiag(const ComplexSymmetricMatrix& a) {
    DiagonalSplit out;
    CMatrix off = a.matrix();
    out.diagonal.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out.diagonal[i] = off(i, i);
        off(i, i) = cplx{};
    }
    out.off_diagonal = ComplexSymmetricMatrix::from_upper(std::move(off));
    return out;
}

/// A_diag + A_off with the two parts scaled independently.
inline ComplexSymmetricMatrix recombine(std::span<const cplx> diagonal, const ComplexSymmetricMatrix& off,
                                        cplx diag_scale = 1.0, cplx off_scale = 1.0) {
    if (diagonal.size() != off.size()) throw Error(Errc::DimensionMismatch, "diagonal length");
    CMatrix m = scaled(off.matrix(), off_scale);
    for (std::size_t i = 0; i < diagonal.size(); ++i) m(i, i) = diag_scale * diagonal[i];
    return ComplexSymmetricMatrix::from_upper(std::move(m));
}

} // namespace hafnium
