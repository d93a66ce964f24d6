#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dampwave {

enum class ErrorCode {
    InvalidArgument,
    CriticalMode,
    RequiresOverdamped,
    OutOfDomain,
    OutOfTable,
    NoSignChange,
    MultipleCrossings,
    NoConvergence,
    GridMismatch,
    FileFormat,
    ZeroH,
    StepUnderflow,
    InsufficientSamples,
    NonpositiveRatio,
    EmptyBand,
    NotOverdamped,
    Config,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Library-wide exception. The code is part of the contract; the message is
/// for humans.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace dampwave
