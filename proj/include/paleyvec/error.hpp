#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace paleyvec {

enum class Errc {
  NonPrime,
  DegreeOutOfRange,
  BudgetExceeded,
  DivisionByZero,
  NotInSubfield,
  EvenCharacteristic,
  NotADivisor,
  ZeroFunctional,
  NoNonzeroSquare,
  WrongDimension,
  WrongParity,
  DegenerateForm,
  ConstructionFailed,
  ZeroDimension,
  CapExceeded,
  NotMaximal,
  StructureViolation,
  DimensionOutOfRange,
  PreconditionViolated,
  ParseError,
  TimeLimit,
};

constexpr std::string_view errc_name(Errc e) noexcept {
  switch (e) {
    case Errc::NonPrime: return "NonPrime";
    case Errc::DegreeOutOfRange: return "DegreeOutOfRange";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::NotInSubfield: return "NotInSubfield";
    case Errc::EvenCharacteristic: return "EvenCharacteristic";
    case Errc::NotADivisor: return "NotADivisor";
    case Errc::ZeroFunctional: return "ZeroFunctional";
    case Errc::NoNonzeroSquare: return "NoNonzeroSquare";
    case Errc::WrongDimension: return "WrongDimension";
    case Errc::WrongParity: return "WrongParity";
    case Errc::DegenerateForm: return "DegenerateForm";
    case Errc::ConstructionFailed: return "ConstructionFailed";
    case Errc::ZeroDimension: return "ZeroDimension";
    case Errc::CapExceeded: return "CapExceeded";
    case Errc::NotMaximal: return "NotMaximal";
    case Errc::StructureViolation: return "StructureViolation";
    case Errc::DimensionOutOfRange: return "DimensionOutOfRange";
    case Errc::PreconditionViolated: return "PreconditionViolated";
    case Errc::ParseError: return "ParseError";
    case Errc::TimeLimit: return "TimeLimit";
  }
  return "Unknown";
}

/// Every failure in the library is reported through this exception; `code()`
/// identifies the condition so callers (and the CLI exit-code mapping) can
/// branch on it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace paleyvec
