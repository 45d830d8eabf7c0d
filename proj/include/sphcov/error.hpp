#pragma once

#include <stdexcept>
#include <string>

namespace sphcov {

enum class ErrorCode {
  DegenerateSegment,
  NotClosed,
  SelfIntersecting,
  NoContact,
  OverlappingInput,
  TooManySegments,
  ScaffoldBlocked,
  TriangulationFailed,
  InvalidSurface,
  PreconditionViolated,
  NotSimple,
  TouchesBranch,
  ImageMeetsSpecial,
  ImagesMismatch,
  NotAdjacent,
  NoSuchPath,
  NegativeH,
  GenerationStuck,
  ParseError,
  AssertionFailed,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sphcov
