#pragma once

#include <stdexcept>
#include <string>

namespace dj {

enum class ErrorCode {
  DimensionMismatch,
  SingularMatrix,
  NotHermitian,
  ParseError,
  MissingField,
  IndexOutOfDomain,
  DomainError,
  InvalidProfile,
  IllConditionedInterpolation,
  DegenerateRoot,
  NullVectorNotFound,
  TruncationTooSmall,
  IoError,
  InvalidArgument,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dj
