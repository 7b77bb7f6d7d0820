#include "chainent/error.hpp"

namespace chainent {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonPositiveGap: return "NonPositiveGap";
    case ErrorCode::NonPositiveSymbol: return "NonPositiveSymbol";
    case ErrorCode::ValidationFailed: return "ValidationFailed";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::BlockOutOfRange: return "BlockOutOfRange";
    case ErrorCode::SizeCap: return "SizeCap";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::ComplexEigenvalue: return "ComplexEigenvalue";
    case ErrorCode::NonPositiveSpectrum: return "NonPositiveSpectrum";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DegenerateDesign: return "DegenerateDesign";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace chainent
