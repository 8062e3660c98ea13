#pragma once

#include <string_view>

#include "symschrod/error.hpp"
#include "symschrod/laurent.hpp"

namespace symschrod {

// Exact potential/coefficient expressions over t, x (or x1..xm), rationals,
// + - * / ^ with integer exponents and parentheses. Division is Laurent:
// the divisor must reduce to a single term. Parse errors carry the offset.
LaurentPoly parse_potential(std::string_view text, std::size_t dim);

// Offset-carrying parse failure.
class ParseError : public Error {
  public:
    ParseError(const std::string& what, std::size_t position)
        : Error(ErrorKind::ParseError, what + " (at offset " + std::to_string(position) + ")"),
          position_(position) {}
    std::size_t position() const { return position_; }

  private:
    std::size_t position_;
};

}  // namespace symschrod
