#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace refless {

enum class ErrorKind {
  LengthMismatch,
  NonDecreasingKappa,
  NonPositiveEntry,
  InterlacingViolated,
  SpecialPotential,
  IndexOutOfRange,
  InvalidParams,
  InvalidArgument,
  FactorizationFailure,
  SingularSystem,
  DomainViolation,
  PoleAtLambda,
  PoleHit,
  Overflow,
  NonPositiveRadicand,
  NewtonDivergence,
  BracketFailure,
  ToleranceNotMet,
  CountMismatch,
  GenericityFailure,
  ParseError,
  FileNotFound,
  WriteError,
};

inline constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::NonDecreasingKappa: return "NonDecreasingKappa";
    case ErrorKind::NonPositiveEntry: return "NonPositiveEntry";
    case ErrorKind::InterlacingViolated: return "InterlacingViolated";
    case ErrorKind::SpecialPotential: return "SpecialPotential";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::FactorizationFailure: return "FactorizationFailure";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::PoleAtLambda: return "PoleAtLambda";
    case ErrorKind::PoleHit: return "PoleHit";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::NonPositiveRadicand: return "NonPositiveRadicand";
    case ErrorKind::NewtonDivergence: return "NewtonDivergence";
    case ErrorKind::BracketFailure: return "BracketFailure";
    case ErrorKind::ToleranceNotMet: return "ToleranceNotMet";
    case ErrorKind::CountMismatch: return "CountMismatch";
    case ErrorKind::GenericityFailure: return "GenericityFailure";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::FileNotFound: return "FileNotFound";
    case ErrorKind::WriteError: return "WriteError";
  }
  return "Unknown";
}

/// Exception carrying a machine-readable kind and, where it applies, the
/// 1-based index of the first offending entry (0 when not applicable).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail, std::size_t index = 0)
      : std::runtime_error(compose(kind, detail, index)), kind_(kind), index_(index) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::size_t index() const noexcept { return index_; }

 private:
  static std::string compose(ErrorKind kind, const std::string& detail, std::size_t index) {
    std::string msg(to_string(kind));
    if (index != 0) msg += " at index " + std::to_string(index);
    if (!detail.empty()) msg += ": " + detail;
    return msg;
  }

  ErrorKind kind_;
  std::size_t index_;
};

}  // namespace refless
