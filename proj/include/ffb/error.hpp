#ifndef FFB_ERROR_HPP
#define FFB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace ffb {

enum class ErrorCode {
    NotPrime,
    EvenCharacteristic,
    ReducibleModulus,
    DivisionByZero,
    FieldMismatch,
    ArityMismatch,
    ShapeMismatch,
    ParseError,
    UnknownVariable,
    CoefficientNotInField,
    DegreeCapExceeded,
    BudgetExceeded,
    NotCubic,
    NotInSliceIdeal,
    CharacteristicTooSmall,
    ZeroDirection,
    UnsupportedR,
    NotSliceRankOne,
    DoesNotVanish,
    InconsistentConstraints,
    GcdViolation,
    InvalidArgument,
};

/// All recoverable failures are thrown as Error; code() selects the CLI exit status.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

const char* error_code_name(ErrorCode code) noexcept;

}  // namespace ffb

#endif
