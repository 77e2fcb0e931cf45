#pragma once

#include <stdexcept>
#include <string>

namespace spdc {

// Mirrors spdc_status in spdc.h; keep the numeric values in sync.
enum class ErrorCode : int {
    InvalidArgument = 1,
    OutOfDomain = 2,
    NoRoot = 3,
    GridTooCoarse = 4,
    AliasingRisk = 5,
    Underresolved = 6,
    Unnormalized = 7,
    Degenerate = 8,
    NotFound = 9,
    Numeric = 10,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace spdc
