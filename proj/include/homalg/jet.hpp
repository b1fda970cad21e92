#pragma once

#include <map>
#include <string>
#include <vector>

#include "homalg/qmatrix.hpp"
#include "homalg/rational.hpp"

namespace homalg {

using Mono = std::vector<int>;

/// Graded order: lower total degree first, then larger exponent of x0 first.
struct MonoLess {
  bool operator()(const Mono& a, const Mono& b) const;
};

int total_degree(const Mono& e);
/// All exponents of total degree <= d in MonoLess order.
const std::vector<Mono>& monomials(int m, int d);
/// Position of e in monomials(m, d); -1 if degree exceeds d.
int monomial_index(int m, int d, const Mono& e);

/// Element of K[x0..x{m-1}]/(deg > d). Coefficients above valid() are not trusted.
class JetPoly {
 public:
  using Terms = std::map<Mono, Rational, MonoLess>;

  JetPoly() = default;
  JetPoly(int m, int d) : m_(m), d_(d), valid_(d) {}

  static JetPoly constant(int m, int d, const Rational& c);
  static JetPoly var(int m, int d, int i);
  static JetPoly monomial(int m, int d, const Mono& e, const Rational& c = 1);

  int vars() const { return m_; }
  int order() const { return d_; }
  int valid() const { return valid_; }
  JetPoly with_valid(int v) const;

  const Terms& terms() const { return terms_; }
  Rational coeff(const Mono& e) const;
  Rational constant_term() const;
  bool is_zero() const { return terms_.empty(); }
  int degree() const;
  bool is_unit() const { return !homalg::is_zero(constant_term()); }

  /// Drops terms of degree > k; valid order unchanged.
  JetPoly truncated(int k) const;

  JetPoly operator+(const JetPoly& g) const;
  JetPoly operator-(const JetPoly& g) const;
  JetPoly operator-() const;
  JetPoly operator*(const JetPoly& g) const;
  JetPoly operator*(const Rational& c) const;
  JetPoly& operator+=(const JetPoly& g) { return *this = *this + g; }
  JetPoly& operator-=(const JetPoly& g) { return *this = *this - g; }

  /// Exact coefficient equality (valid orders ignored).
  bool operator==(const JetPoly& g) const { return m_ == g.m_ && d_ == g.d_ && terms_ == g.terms_; }

  /// Dense coefficients on monomials(m, k).
  QVec coords(int k) const;
  static JetPoly from_coords(int m, int d, int k, const QVec& v, std::size_t offset = 0);

  void add_term(const Mono& e, const Rational& c);

 private:
  void check_shape(const JetPoly& g) const;

  int m_ = 0;
  int d_ = 0;
  int valid_ = 0;
  Terms terms_;
};

JetPoly jet_mul(const JetPoly& f, const JetPoly& g);
/// Formal d/dx_i; valid order drops by one.
JetPoly jet_partial(int i, const JetPoly& f);
/// Multiplicative inverse of a unit; throws NotInvertible.
JetPoly jet_inverse(const JetPoly& f);

/// Degree up to which f and g are compared at the given loss.
int compare_order(const JetPoly& f, const JetPoly& g, int loss);
bool budget_eq(const JetPoly& f, const JetPoly& g, int loss);
/// f - g restricted to compare_order.
JetPoly budget_residual(const JetPoly& f, const JetPoly& g, int loss);

std::string to_string(const JetPoly& f);

struct ParseError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct UnknownVariable : ParseError {
  using ParseError::ParseError;
};

/// Grammar: "1 - 2/3*x0^2*x1". Terms above degree d are truncated away.
JetPoly parse_poly(const std::string& text, int m, int d);

/// Substitution endomorphism x_i -> phi_i with phi_i(0) = 0.
class BaseEndo {
 public:
  BaseEndo() = default;
  BaseEndo(int m, int d, std::vector<JetPoly> components);
  static BaseEndo identity(int m, int d);

  int vars() const { return m_; }
  int order() const { return d_; }
  const std::vector<JetPoly>& components() const { return comps_; }
  const QMatrix& linear_part() const { return linear_; }
  bool invertible() const;

 private:
  int m_ = 0;
  int d_ = 0;
  std::vector<JetPoly> comps_;
  QMatrix linear_;
};

/// f(phi_1, ..., phi_m).
JetPoly jet_substitute(const BaseEndo& phi, const JetPoly& f);
/// (phi o psi)(x) = phi(psi(x)).
BaseEndo endo_compose(const BaseEndo& phi, const BaseEndo& psi);
/// Compositional inverse; throws NotInvertible.
BaseEndo endo_invert(const BaseEndo& phi);

/// Base data (m, d, phi) with the inverse cached.
class Base {
 public:
  explicit Base(BaseEndo phi);
  int vars() const { return phi_.vars(); }
  int order() const { return phi_.order(); }
  const BaseEndo& phi() const { return phi_; }
  const BaseEndo& phi_inv() const { return phi_inv_; }

  /// (phi*)^k f for any integer k.
  JetPoly pull(const JetPoly& f, int k = 1) const;
  JetPoly zero() const { return JetPoly(vars(), order()); }
  JetPoly one() const { return JetPoly::constant(vars(), order(), 1); }
  JetPoly constant(const Rational& c) const { return JetPoly::constant(vars(), order(), c); }
  const std::vector<Mono>& basis() const { return monomials(vars(), order()); }

 private:
  BaseEndo phi_;
  BaseEndo phi_inv_;
};

}  // namespace homalg
