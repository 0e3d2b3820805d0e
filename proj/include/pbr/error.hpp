#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pbr {

/// Error categories surfaced by the library. The CLI maps every one of them
/// to exit status 1.
enum class ErrorKind {
    InvalidConfig,
    InvalidAlpha,
    EmptyInput,
    TooManyDcs,
    DimensionMismatch,
    RateViolation,
    CapacityOverflow,
    TimingInfeasible,
    WorkloadMismatch,
    ParseError,
    NegativeLoad,
    IoError,
    InvariantViolation,
};

std::string_view to_string(ErrorKind kind);

/// Exception carrying the error kind and the module that raised it.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string module, const std::string& message);

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& module() const noexcept { return module_; }

private:
    ErrorKind kind_;
    std::string module_;
};

} // namespace pbr
