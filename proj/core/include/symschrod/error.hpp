#pragma once

#include <stdexcept>
#include <string>

namespace symschrod {

enum class ErrorKind {
    ArityMismatch,
    PoleAtPoint,
    TimeDependentPotential,
    ParseError,
    BadArgument,
    SaturationFailure,
    ConstraintViolated,
    BlowUp,
    Unsupported,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

}  // namespace symschrod
