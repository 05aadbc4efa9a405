#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dnls {

enum class ErrorCode {
    InvalidArgument,
    InvalidPotential,
    InvalidProfile,
    NonPositiveFrequency,
    OutOfDomain,
    NonFiniteValue,
    NoExponentialTail,
    DegenerateTail,
    WindowTooSmall,
    NoPlateauCandidates,
    QuadratureFailure,
    HypothesisViolated,
    WindowNotCovered,
    MalformedInput,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library. The code is stable and is what the
/// CLI prints as the diagnostic tag.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidPotential: return "InvalidPotential";
    case ErrorCode::InvalidProfile: return "InvalidProfile";
    case ErrorCode::NonPositiveFrequency: return "NonPositiveFrequency";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::NoExponentialTail: return "NoExponentialTail";
    case ErrorCode::DegenerateTail: return "DegenerateTail";
    case ErrorCode::WindowTooSmall: return "WindowTooSmall";
    case ErrorCode::NoPlateauCandidates: return "NoPlateauCandidates";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::WindowNotCovered: return "WindowNotCovered";
    case ErrorCode::MalformedInput: return "MalformedInput";
    }
    return "Unknown";
}

} // namespace dnls
