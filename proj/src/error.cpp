#include "simpnet/error.hpp"

namespace simpnet {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonPure: return "NonPure";
    case ErrorCode::AffinelyDependent: return "AffinelyDependent";
    case ErrorCode::BadIntersection: return "BadIntersection";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NotASimplex: return "NotASimplex";
    case ErrorCode::NonPositiveEpsilon: return "NonPositiveEpsilon";
    case ErrorCode::TooManyPoints: return "TooManyPoints";
    case ErrorCode::DegenerateSimplex: return "DegenerateSimplex";
    case ErrorCode::OffAffineHull: return "OffAffineHull";
    case ErrorCode::InvalidVertexMap: return "InvalidVertexMap";
    case ErrorCode::NotASimplexImage: return "NotASimplexImage";
    case ErrorCode::OutsideDomain: return "OutsideDomain";
    case ErrorCode::SamplerFailure: return "SamplerFailure";
    case ErrorCode::StarConditionUnsatisfied: return "StarConditionUnsatisfied";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::OutsideSimplex: return "OutsideSimplex";
  }
  return "Unknown";
}

}  // namespace simpnet
