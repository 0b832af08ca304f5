#pragma once

#include <stdexcept>
#include <string>

namespace mft {

enum class ErrorCode {
    NonSquare,
    SpectrumOnCut,
    OverflowRisk,
    Singular,
    DimensionMismatch,
    InvalidConfig,
    RegularityViolation,
    DegenerateBoundary,
    OmegaSingular,
    OutOfDomain,
    MissingTraces,
    EmptyImage,
    NonConvergentTail,
    WrongMode,
    GridTooCoarse,
    ConjugationViolated,
    UnstableStep,
    UnsupportedDimension,
    NonpositiveHeight,
    ParseError,
    Io,
};

const char* to_string(ErrorCode code);

// Every library failure is reported as an Error carrying a machine-readable code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace mft
