#include <pbr/error.hpp>

namespace pbr {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::InvalidAlpha: return "InvalidAlpha";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::TooManyDcs: return "TooManyDcs";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::RateViolation: return "RateViolation";
    case ErrorKind::CapacityOverflow: return "CapacityOverflow";
    case ErrorKind::TimingInfeasible: return "TimingInfeasible";
    case ErrorKind::WorkloadMismatch: return "WorkloadMismatch";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::NegativeLoad: return "NegativeLoad";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, std::string module, const std::string& message)
    : std::runtime_error(module + ": " + std::string(to_string(kind)) + ": " + message),
      kind_(kind), module_(std::move(module)) {}

} // namespace pbr
