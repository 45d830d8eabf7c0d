#include "sphcov/error.hpp"

namespace sphcov {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegenerateSegment: return "DegenerateSegment";
    case ErrorCode::NotClosed: return "NotClosed";
    case ErrorCode::SelfIntersecting: return "SelfIntersecting";
    case ErrorCode::NoContact: return "NoContact";
    case ErrorCode::OverlappingInput: return "OverlappingInput";
    case ErrorCode::TooManySegments: return "TooManySegments";
    case ErrorCode::ScaffoldBlocked: return "ScaffoldBlocked";
    case ErrorCode::TriangulationFailed: return "TriangulationFailed";
    case ErrorCode::InvalidSurface: return "InvalidSurface";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::NotSimple: return "NotSimple";
    case ErrorCode::TouchesBranch: return "TouchesBranch";
    case ErrorCode::ImageMeetsSpecial: return "ImageMeetsSpecial";
    case ErrorCode::ImagesMismatch: return "ImagesMismatch";
    case ErrorCode::NotAdjacent: return "NotAdjacent";
    case ErrorCode::NoSuchPath: return "NoSuchPath";
    case ErrorCode::NegativeH: return "NegativeH";
    case ErrorCode::GenerationStuck: return "GenerationStuck";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::AssertionFailed: return "AssertionFailed";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

}  // namespace sphcov
