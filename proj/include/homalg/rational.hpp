#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace homalg {

/// Exact rational in lowest terms. GMP keeps results canonical after every operation.
using Rational = mpq_class;
using QVec = std::vector<Rational>;

struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NotInvertible : std::domain_error {
  using std::domain_error::domain_error;
};

struct DegreeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// "p" or "p/q".
std::string to_string(const Rational& q);

/// Accepts "p" or "p/q" with optional sign; throws std::invalid_argument.
Rational parse_rational(const std::string& text);

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }

}  // namespace homalg
