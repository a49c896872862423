#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dracula {

enum class ErrorKind {
  EmptyCorpus,
  EmptyDocument,
  InvalidParam,
  Infeasible,
  NumericalFailure,
  TooLarge,
  DegenerateTraining,
  DimensionMismatch,
  ParseError,
};

constexpr std::string_view error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptyCorpus: return "EmptyCorpus";
    case ErrorKind::EmptyDocument: return "EmptyDocument";
    case ErrorKind::InvalidParam: return "InvalidParam";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::DegenerateTraining: return "DegenerateTraining";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above so the
/// CLI can map it onto an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(error_name(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace dracula
