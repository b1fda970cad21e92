#pragma once

#include <vector>

#include "homalg/jet.hpp"

namespace homalg {

/// Column of jets: a section of a trivial bundle.
using Vec = std::vector<JetPoly>;

Vec zero_vec(const Base& b, int r);
Vec basis_vec(const Base& b, int r, int k);
Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);
Vec scale(const JetPoly& f, const Vec& v);
Vec scale(const Rational& c, const Vec& v);
Vec pull(const Base& b, const Vec& v, int k = 1);
Vec truncated(const Vec& v, int k);
bool budget_eq(const Vec& a, const Vec& b, int loss);
/// Minimum compare_order over components, or order - loss for empty vectors.
int compare_order(const Vec& a, const Vec& b, int loss);
int valid(const Vec& v);

/// Matrix with entries in the jet algebra.
class PolyMatrix {
 public:
  PolyMatrix() = default;
  PolyMatrix(int rows, int cols, int m, int d);
  static PolyMatrix identity(int n, int m, int d);
  static PolyMatrix from_q(const QMatrix& q, int m, int d);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int vars() const { return m_; }
  int order() const { return d_; }
  JetPoly& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  const JetPoly& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

  PolyMatrix operator*(const PolyMatrix& b) const;
  Vec operator*(const Vec& v) const;
  PolyMatrix operator+(const PolyMatrix& b) const;
  PolyMatrix operator-(const PolyMatrix& b) const;
  PolyMatrix scaled(const JetPoly& f) const;
  PolyMatrix scaled(const Rational& c) const;
  PolyMatrix pulled(const Base& b, int k = 1) const;
  PolyMatrix truncated(int k) const;
  PolyMatrix transpose() const;
  bool operator==(const PolyMatrix& b) const = default;

  QMatrix constant_part() const;
  bool is_invertible() const;
  /// Inverse over the jet algebra; throws NotInvertible.
  PolyMatrix inverse() const;
  bool is_zero() const;
  int valid() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  int m_ = 0;
  int d_ = 0;
  std::vector<JetPoly> a_;
};

bool budget_eq(const PolyMatrix& a, const PolyMatrix& b, int loss);

/// s -> M * (phi*)^twist s.
struct Twisted {
  PolyMatrix M;
  int twist = 1;
};

/// A phi*-linear morphism of sections.
using TwistedMor = Twisted;

Vec apply(const Base& b, const Twisted& t, const Vec& s);
/// (t o u)(s) = t(u(s)).
Twisted compose(const Base& b, const Twisted& t, const Twisted& u);
Twisted inverse(const Base& b, const Twisted& t);
Twisted operator+(const Twisted& a, const Twisted& b);
Twisted operator-(const Twisted& a, const Twisted& b);
Twisted scale(const JetPoly& f, const Twisted& t);
Twisted scale(const Rational& c, const Twisted& t);
bool budget_eq(const Twisted& a, const Twisted& b, int loss);

}  // namespace homalg
