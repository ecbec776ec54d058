#pragma once

#include <stdexcept>
#include <string>

namespace hdet {

enum class ErrorCode {
    PoleInput,
    RangeExceeded,
    InvalidOrder,
    SizeExceeded,
    TruncationFailure,
    UnknownKernel,
    InvalidParam,
    FlavorDomain,
    StripViolation,
    NearSingular,
    InsufficientDepth,
    OnContour,
    AsymmetricKernel,
    BlowUp,
    SingularCoefficient,
    SymbolNotSubunit,
    UnsupportedKernel,
    OutsideAsymptoticRange,
    SeriesDiverging
};

const char* error_name(ErrorCode code);

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what);
    ErrorCode code() const noexcept { return code_; }
    /// True for codes that describe bad user input rather than numerical trouble.
    bool is_usage() const noexcept;

private:
    ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

} // namespace hdet
