#pragma once

#include <stdexcept>
#include <string>

namespace sl2 {

/// Failure categories shared by every operation of the library.
enum class Errc {
  NotPrime,
  CharTwoUnsupported,
  ReducibleModulus,
  DimensionMismatch,
  NonSquare,
  FieldMismatch,
  CharTooSmall,
  CharZeroUnsupported,
  BadCharacteristicWindow,
  NotInvariant,
  BudgetExceeded,
  Unbounded,
  FieldTooLargeForExhaustiveCheck,
  HypothesisViolated,
  WitnessConstructionFailed,
  NotAnSab,
  NonInvertibleUnsupported,
  DivisionUnavailable,
  NotDirect,
  BoundViolated,
  HeightUnboundedWithinCap,
  DivisionByZero,
  Malformed,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::NotPrime: return "NotPrime";
    case Errc::CharTwoUnsupported: return "CharTwoUnsupported";
    case Errc::ReducibleModulus: return "ReducibleModulus";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NonSquare: return "NonSquare";
    case Errc::FieldMismatch: return "FieldMismatch";
    case Errc::CharTooSmall: return "CharTooSmall";
    case Errc::CharZeroUnsupported: return "CharZeroUnsupported";
    case Errc::BadCharacteristicWindow: return "BadCharacteristicWindow";
    case Errc::NotInvariant: return "NotInvariant";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::Unbounded: return "Unbounded";
    case Errc::FieldTooLargeForExhaustiveCheck: return "FieldTooLargeForExhaustiveCheck";
    case Errc::HypothesisViolated: return "HypothesisViolated";
    case Errc::WitnessConstructionFailed: return "WitnessConstructionFailed";
    case Errc::NotAnSab: return "NotAnSab";
    case Errc::NonInvertibleUnsupported: return "NonInvertibleUnsupported";
    case Errc::DivisionUnavailable: return "DivisionUnavailable";
    case Errc::NotDirect: return "NotDirect";
    case Errc::BoundViolated: return "BoundViolated";
    case Errc::HeightUnboundedWithinCap: return "HeightUnboundedWithinCap";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::Malformed: return "Malformed";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace sl2
