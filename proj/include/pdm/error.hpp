#ifndef PDM_ERROR_HPP
#define PDM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace pdm {

enum class ErrorCode {
  InvalidInput,
  DomainError,
  BracketFailure,
  NonUnitGamma,
  DimensionTooLarge,
  ParseError,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::BracketFailure: return "BracketFailure";
    case ErrorCode::NonUnitGamma: return "NonUnitGamma";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pdm

#endif  // PDM_ERROR_HPP
