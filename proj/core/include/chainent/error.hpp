#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chainent {

enum class ErrorCode {
  NonPositiveGap,
  NonPositiveSymbol,
  ValidationFailed,
  SingularMatrix,
  BlockOutOfRange,
  SizeCap,
  DomainError,
  NotPositiveDefinite,
  ComplexEigenvalue,
  NonPositiveSpectrum,
  IndexOutOfRange,
  DegenerateDesign,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(std::string(to_string(code)) + ": " + msg), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace chainent
