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

#include <stdexcept>
#include <string>
#include <string_view>

namespace hafnium {

enum class Errc {
    NonSquare,
    AsymmetricInput,
    OddDimension,
    ParseError,
    DimensionMismatch,
    LengthMismatch,
    EigensolverNoConvergence,
    DegenerateHessenberg,
    CapacityExceeded,
    TooLarge,
    OutOfRange,
    BadFamily,
    DivisionByZeroReference,
    BudgetExceeded,
    InsufficientData,
    IoError,
};

/// Coarse grouping of error codes; the CLI maps these onto exit codes.
enum class ErrorCategory { usage, parse, dimension, numeric, budget };

constexpr std::string_view errc_name(Errc e) noexcept {
    switch (e) {
    case Errc::NonSquare: return "NonSquare";
    case Errc::AsymmetricInput: return "AsymmetricInput";
    case Errc::OddDimension: return "OddDimension";
    case Errc::ParseError: return "ParseError";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::EigensolverNoConvergence: return "EigensolverNoConvergence";
    case Errc::DegenerateHessenberg: return "DegenerateHessenberg";
    case Errc::CapacityExceeded: return "CapacityExceeded";
    case Errc::TooLarge: return "TooLarge";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::BadFamily: return "BadFamily";
    case Errc::DivisionByZeroReference: return "DivisionByZeroReference";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::InsufficientData: return "InsufficientData";
    case Errc::IoError: return "IoError";
    }
    return "Unknown";
}

constexpr ErrorCategory category(Errc e) noexcept {
    switch (e) {
    case Errc::ParseError:
    case Errc::IoError:
        return ErrorCategory::parse;
    case Errc::NonSquare:
    case Errc::AsymmetricInput:
    case Errc::OddDimension:
    case Errc::DimensionMismatch:
    case Errc::LengthMismatch:
        return ErrorCategory::dimension;
    case Errc::EigensolverNoConvergence:
    case Errc::DegenerateHessenberg:
    case Errc::DivisionByZeroReference:
    case Errc::InsufficientData:
        return ErrorCategory::numeric;
    case Errc::CapacityExceeded:
    case Errc::TooLarge:
    case Errc::BudgetExceeded:
        return ErrorCategory::budget;
    case Errc::OutOfRange:
    case Errc::BadFamily:
        return ErrorCategory::usage;
    }
    return ErrorCategory::usage;
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

/// Parse failure with 1-based source position (0 when unknown).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column = 0)
        : Error(Errc::ParseError, "line " + std::to_string(line) + ", column " +
                                      std::to_string(column) + ": " + what),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

} // namespace hafnium
