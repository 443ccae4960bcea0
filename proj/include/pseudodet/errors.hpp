#pragma once

#include <stdexcept>
#include <string>

namespace pseudodet {

// Every failure mode the library reports deliberately. Codes map 1:1 onto
// the documented error conditions of the public operations; `internal` marks
// states that are unreachable for well-formed inputs.
enum class errc {
  group_too_large,
  not_a_representation,
  two_not_invertible,
  quotient_not_cyclic,
  non_integral_exponent,
  non_integral_constant,
  parity_mismatch,
  requires_char_p,
  insufficient_precision,
  not_ordinary,
  roots_not_rational,
  not_stable,
  non_commuting,
  not_proper,
  lift_failure,
  missing_frobenius_data,
  not_free,
  parse_error,
  validation_error,
  out_of_range,
  internal,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::group_too_large: return "GroupTooLarge";
    case errc::not_a_representation: return "NotARepresentation";
    case errc::two_not_invertible: return "TwoNotInvertible";
    case errc::quotient_not_cyclic: return "QuotientNotCyclic";
    case errc::non_integral_exponent: return "NonIntegralExponent";
    case errc::non_integral_constant: return "NonIntegralConstant";
    case errc::parity_mismatch: return "ParityMismatch";
    case errc::requires_char_p: return "RequiresCharP";
    case errc::insufficient_precision: return "InsufficientPrecision";
    case errc::not_ordinary: return "NotOrdinary";
    case errc::roots_not_rational: return "RootsNotRational";
    case errc::not_stable: return "NotStable";
    case errc::non_commuting: return "NonCommuting";
    case errc::not_proper: return "NotProper";
    case errc::lift_failure: return "LiftFailure";
    case errc::missing_frobenius_data: return "MissingFrobeniusData";
    case errc::not_free: return "NotFree";
    case errc::parse_error: return "ParseError";
    case errc::validation_error: return "ValidationError";
    case errc::out_of_range: return "OutOfRange";
    case errc::internal: return "Internal";
  }
  return "Internal";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) {
  throw error(code, what);
}

inline void require(bool cond, errc code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace pseudodet
