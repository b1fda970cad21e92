#pragma once

#include <optional>
#include <vector>

#include "homalg/rational.hpp"

namespace homalg {

/// Dense row-major matrix over Q.
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols) {}

  static QMatrix identity(int n);
  /// Columns given as vectors of equal length `rows`.
  static QMatrix from_columns(int rows, const std::vector<QVec>& cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Rational& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  const Rational& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

  QVec column(int j) const;
  QMatrix transpose() const;
  QMatrix operator*(const QMatrix& b) const;
  QVec operator*(const QVec& v) const;
  QMatrix operator+(const QMatrix& b) const;
  QMatrix operator-(const QMatrix& b) const;
  bool operator==(const QMatrix& b) const = default;
  bool is_zero() const;

  /// Horizontal and vertical concatenation.
  static QMatrix hcat(const QMatrix& a, const QMatrix& b);
  static QMatrix vcat(const QMatrix& a, const QMatrix& b);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Rational> a_;
};

struct Rref {
  QMatrix r;
  std::vector<int> pivots;
};

Rref rref(QMatrix m);
int rank(const QMatrix& m);
/// Basis of {v : m v = 0}, one vector per free column, in rref-canonical form.
std::vector<QVec> nullspace(const QMatrix& m);
/// Some solution of m x = b, or nullopt when inconsistent.
std::optional<QVec> solve(const QMatrix& m, const QVec& b);
/// Inverse of a square matrix; throws NotInvertible.
QMatrix inverse(const QMatrix& m);
/// Determinant by exact elimination.
Rational det(const QMatrix& m);

Rational dot(const QVec& a, const QVec& b);
QVec axpy(const Rational& a, const QVec& x, const QVec& y);  // a*x + y
bool is_zero(const QVec& v);

/// Canonical basis (rref rows) of the span of the given vectors of length `dim`.
std::vector<QVec> span_basis(int dim, const std::vector<QVec>& vs);
/// Whether span(a) == span(b) as subspaces of K^dim.
bool same_span(int dim, const std::vector<QVec>& a, const std::vector<QVec>& b);

}  // namespace homalg
