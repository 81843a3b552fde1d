#pragma once

#include <charconv>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qpe {

enum class ErrorKind {
    InvalidParameter,
    InvalidRange,
    OrthogonalPostSelection,
    ZeroProbabilityOutcome,
    PoleAtTheta,
    GridUnderresolved,
    WindowTooSmall,
    NonPositiveN0,
};

constexpr std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidParameter: return "InvalidParameter";
        case ErrorKind::InvalidRange: return "InvalidRange";
        case ErrorKind::OrthogonalPostSelection: return "OrthogonalPostSelection";
        case ErrorKind::ZeroProbabilityOutcome: return "ZeroProbabilityOutcome";
        case ErrorKind::PoleAtTheta: return "PoleAtTheta";
        case ErrorKind::GridUnderresolved: return "GridUnderresolved";
        case ErrorKind::WindowTooSmall: return "WindowTooSmall";
        case ErrorKind::NonPositiveN0: return "NonPositiveN0";
    }
    return "Unknown";
}

/// Base of every error raised by the library. `kind()` drives the CLI exit code.
class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, const std::string &message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {
    }
    ErrorKind kind() const noexcept {
        return kind_;
    }

   private:
    ErrorKind kind_;
};

template <ErrorKind K>
class TypedError : public Error {
   public:
    explicit TypedError(const std::string &message) : Error(K, message) {
    }
};

using InvalidParameter = TypedError<ErrorKind::InvalidParameter>;
using InvalidRange = TypedError<ErrorKind::InvalidRange>;
/// Pre- and post-selection (nearly) orthogonal; the weak value diverges.
using OrthogonalPostSelection = TypedError<ErrorKind::OrthogonalPostSelection>;
using ZeroProbabilityOutcome = TypedError<ErrorKind::ZeroProbabilityOutcome>;
using PoleAtTheta = TypedError<ErrorKind::PoleAtTheta>;
using GridUnderresolved = TypedError<ErrorKind::GridUnderresolved>;
using WindowTooSmall = TypedError<ErrorKind::WindowTooSmall>;
using NonPositiveN0 = TypedError<ErrorKind::NonPositiveN0>;

/// Shortest round-trip text of x for error messages.
inline std::string describe(double x) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

}  // namespace qpe
