#include "dampwave/error.hpp"

namespace dampwave {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::CriticalMode: return "CriticalMode";
        case ErrorCode::RequiresOverdamped: return "RequiresOverdamped";
        case ErrorCode::OutOfDomain: return "OutOfDomain";
        case ErrorCode::OutOfTable: return "OutOfTable";
        case ErrorCode::NoSignChange: return "NoSignChange";
        case ErrorCode::MultipleCrossings: return "MultipleCrossings";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::GridMismatch: return "GridMismatch";
        case ErrorCode::FileFormat: return "FileFormat";
        case ErrorCode::ZeroH: return "ZeroH";
        case ErrorCode::StepUnderflow: return "StepUnderflow";
        case ErrorCode::InsufficientSamples: return "InsufficientSamples";
        case ErrorCode::NonpositiveRatio: return "NonpositiveRatio";
        case ErrorCode::EmptyBand: return "EmptyBand";
        case ErrorCode::NotOverdamped: return "NotOverdamped";
        case ErrorCode::Config: return "Config";
    }
    return "Unknown";
}

}  // namespace dampwave
