#pragma once

#include <stdexcept>
#include <string>

namespace stlf {

enum class ErrorKind {
    InvalidArgument,
    InvalidSeries,
    EmptyIntersection,
    ZeroVariance,
    Io,
    FormatError,
    NoData,
    TooShort,
    DegenerateSplit,
    RankDeficient,
    SchemaMismatch,
    DegenerateDof,
    LengthMismatch,
    LagTooLarge,
    NonPositiveWeight,
    ParameterMismatch,
    NotTemperatureDependent,
    InsufficientData,
};

const char* to_string(ErrorKind kind) noexcept;

// Every recoverable failure in the library is reported as an Error carrying
// its kind, so callers (tests, the CLI exit-code mapping) can branch on it.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace stlf
