#include "stlf/error.hpp"

namespace stlf {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::InvalidSeries: return "InvalidSeries";
        case ErrorKind::EmptyIntersection: return "EmptyIntersection";
        case ErrorKind::ZeroVariance: return "ZeroVariance";
        case ErrorKind::Io: return "Io";
        case ErrorKind::FormatError: return "FormatError";
        case ErrorKind::NoData: return "NoData";
        case ErrorKind::TooShort: return "TooShort";
        case ErrorKind::DegenerateSplit: return "DegenerateSplit";
        case ErrorKind::RankDeficient: return "RankDeficient";
        case ErrorKind::SchemaMismatch: return "SchemaMismatch";
        case ErrorKind::DegenerateDof: return "DegenerateDof";
        case ErrorKind::LengthMismatch: return "LengthMismatch";
        case ErrorKind::LagTooLarge: return "LagTooLarge";
        case ErrorKind::NonPositiveWeight: return "NonPositiveWeight";
        case ErrorKind::ParameterMismatch: return "ParameterMismatch";
        case ErrorKind::NotTemperatureDependent: return "NotTemperatureDependent";
        case ErrorKind::InsufficientData: return "InsufficientData";
    }
    return "Unknown";
}

}  // namespace stlf
