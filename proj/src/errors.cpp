#include "mft/errors.hpp"

namespace mft {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::NonSquare: return "NonSquare";
        case ErrorCode::SpectrumOnCut: return "SpectrumOnCut";
        case ErrorCode::OverflowRisk: return "OverflowRisk";
        case ErrorCode::Singular: return "Singular";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::RegularityViolation: return "RegularityViolation";
        case ErrorCode::DegenerateBoundary: return "DegenerateBoundary";
        case ErrorCode::OmegaSingular: return "OmegaSingular";
        case ErrorCode::OutOfDomain: return "OutOfDomain";
        case ErrorCode::MissingTraces: return "MissingTraces";
        case ErrorCode::EmptyImage: return "EmptyImage";
        case ErrorCode::NonConvergentTail: return "NonConvergentTail";
        case ErrorCode::WrongMode: return "WrongMode";
        case ErrorCode::GridTooCoarse: return "GridTooCoarse";
        case ErrorCode::ConjugationViolated: return "ConjugationViolated";
        case ErrorCode::UnstableStep: return "UnstableStep";
        case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
        case ErrorCode::NonpositiveHeight: return "NonpositiveHeight";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

}  // namespace mft
