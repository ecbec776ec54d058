#include "hdet/errors.hpp"

namespace hdet {

const char* error_name(ErrorCode code)
{
    switch (code) {
    case ErrorCode::PoleInput: return "PoleInput";
    case ErrorCode::RangeExceeded: return "RangeExceeded";
    case ErrorCode::InvalidOrder: return "InvalidOrder";
    case ErrorCode::SizeExceeded: return "SizeExceeded";
    case ErrorCode::TruncationFailure: return "TruncationFailure";
    case ErrorCode::UnknownKernel: return "UnknownKernel";
    case ErrorCode::InvalidParam: return "InvalidParam";
    case ErrorCode::FlavorDomain: return "FlavorDomain";
    case ErrorCode::StripViolation: return "StripViolation";
    case ErrorCode::NearSingular: return "NearSingular";
    case ErrorCode::InsufficientDepth: return "InsufficientDepth";
    case ErrorCode::OnContour: return "OnContour";
    case ErrorCode::AsymmetricKernel: return "AsymmetricKernel";
    case ErrorCode::BlowUp: return "BlowUp";
    case ErrorCode::SingularCoefficient: return "SingularCoefficient";
    case ErrorCode::SymbolNotSubunit: return "SymbolNotSubunit";
    case ErrorCode::UnsupportedKernel: return "UnsupportedKernel";
    case ErrorCode::OutsideAsymptoticRange: return "OutsideAsymptoticRange";
    case ErrorCode::SeriesDiverging: return "SeriesDiverging";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code)
{
}

bool Error::is_usage() const noexcept
{
    switch (code_) {
    case ErrorCode::UnknownKernel:
    case ErrorCode::InvalidParam:
    case ErrorCode::InvalidOrder:
    case ErrorCode::SizeExceeded:
    case ErrorCode::FlavorDomain:
    case ErrorCode::AsymmetricKernel:
    case ErrorCode::UnsupportedKernel:
        return true;
    default:
        return false;
    }
}

void fail(ErrorCode code, const std::string& what)
{
    throw Error(code, what);
}

} // namespace hdet
