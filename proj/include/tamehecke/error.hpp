#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tamehecke {

enum class ErrorCode {
  non_prime_characteristic,
  reducible_modulus,
  malformed_modulus,
  field_too_large,
  field_mismatch,
  division_by_zero,
  coincident_points,
  point_not_in_d,
  point_in_d,
  degenerate_divisor,
  flag_equals_induced_flag,
  malformed_flag_data,
  rank_deficient,
  not_in_relevant_locus,
  dimension_mismatch,
  normalization_singular,
  degenerate_input,
  unsupported_kind,
  basis_unsolved,
  size_mismatch,
  non_square,
  degenerate_spectrum,
  internal_invariant,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::non_prime_characteristic: return "NonPrimeCharacteristic";
    case ErrorCode::reducible_modulus: return "ReducibleModulus";
    case ErrorCode::malformed_modulus: return "MalformedModulus";
    case ErrorCode::field_too_large: return "FieldTooLarge";
    case ErrorCode::field_mismatch: return "FieldMismatch";
    case ErrorCode::division_by_zero: return "DivisionByZero";
    case ErrorCode::coincident_points: return "CoincidentPoints";
    case ErrorCode::point_not_in_d: return "PointNotInD";
    case ErrorCode::point_in_d: return "PointInD";
    case ErrorCode::degenerate_divisor: return "DegenerateDivisor";
    case ErrorCode::flag_equals_induced_flag: return "FlagEqualsInducedFlag";
    case ErrorCode::malformed_flag_data: return "MalformedFlagData";
    case ErrorCode::rank_deficient: return "RankDeficient";
    case ErrorCode::not_in_relevant_locus: return "NotInRelevantLocus";
    case ErrorCode::dimension_mismatch: return "DimensionMismatch";
    case ErrorCode::normalization_singular: return "NormalizationSingular";
    case ErrorCode::degenerate_input: return "DegenerateInput";
    case ErrorCode::unsupported_kind: return "UnsupportedKind";
    case ErrorCode::basis_unsolved: return "BasisUnsolved";
    case ErrorCode::size_mismatch: return "SizeMismatch";
    case ErrorCode::non_square: return "NonSquare";
    case ErrorCode::degenerate_spectrum: return "DegenerateSpectrum";
    case ErrorCode::internal_invariant: return "InternalInvariant";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) throw Error(code, what);
}

}  // namespace tamehecke
