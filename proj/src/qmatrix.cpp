#include "homalg/qmatrix.hpp"

#include <utility>

namespace homalg {

QMatrix QMatrix::identity(int n) {
  QMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

QMatrix QMatrix::from_columns(int rows, const std::vector<QVec>& cols) {
  QMatrix m(rows, static_cast<int>(cols.size()));
  for (int j = 0; j < m.cols(); ++j) {
    if (static_cast<int>(cols[j].size()) != rows) throw ShapeError("from_columns: column length");
    for (int i = 0; i < rows; ++i) m(i, j) = cols[j][i];
  }
  return m;
}

QVec QMatrix::column(int j) const {
  QVec v(rows_);
  for (int i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

QMatrix QMatrix::transpose() const {
  QMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

QMatrix QMatrix::operator*(const QMatrix& b) const {
  if (cols_ != b.rows_) throw ShapeError("QMatrix product shape");
  QMatrix c(rows_, b.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const Rational& a = (*this)(i, k);
      if (homalg::is_zero(a)) continue;
      for (int j = 0; j < b.cols_; ++j) c(i, j) += a * b(k, j);
    }
  return c;
}

QVec QMatrix::operator*(const QVec& v) const {
  if (static_cast<int>(v.size()) != cols_) throw ShapeError("QMatrix-vector shape");
  QVec out(rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
  return out;
}

QMatrix QMatrix::operator+(const QMatrix& b) const {
  if (rows_ != b.rows_ || cols_ != b.cols_) throw ShapeError("QMatrix sum shape");
  QMatrix c = *this;
  for (std::size_t i = 0; i < a_.size(); ++i) c.a_[i] += b.a_[i];
  return c;
}

QMatrix QMatrix::operator-(const QMatrix& b) const {
  if (rows_ != b.rows_ || cols_ != b.cols_) throw ShapeError("QMatrix difference shape");
  QMatrix c = *this;
  for (std::size_t i = 0; i < a_.size(); ++i) c.a_[i] -= b.a_[i];
  return c;
}

bool QMatrix::is_zero() const {
  for (const auto& x : a_)
    if (!homalg::is_zero(x)) return false;
  return true;
}

QMatrix QMatrix::hcat(const QMatrix& a, const QMatrix& b) {
  if (a.rows_ != b.rows_) throw ShapeError("hcat rows");
  QMatrix c(a.rows_, a.cols_ + b.cols_);
  for (int i = 0; i < a.rows_; ++i) {
    for (int j = 0; j < a.cols_; ++j) c(i, j) = a(i, j);
    for (int j = 0; j < b.cols_; ++j) c(i, a.cols_ + j) = b(i, j);
  }
  return c;
}

QMatrix QMatrix::vcat(const QMatrix& a, const QMatrix& b) {
  if (a.cols_ != b.cols_) throw ShapeError("vcat cols");
  QMatrix c(a.rows_ + b.rows_, a.cols_);
  for (int i = 0; i < a.rows_; ++i)
    for (int j = 0; j < a.cols_; ++j) c(i, j) = a(i, j);
  for (int i = 0; i < b.rows_; ++i)
    for (int j = 0; j < b.cols_; ++j) c(a.rows_ + i, j) = b(i, j);
  return c;
}

Rref rref(QMatrix m) {
  Rref out;
  int row = 0;
  for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
    int piv = -1;
    for (int i = row; i < m.rows(); ++i)
      if (!is_zero(m(i, col))) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != row)
      for (int j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(row, j));
    Rational inv = 1 / m(row, col);
    for (int j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (int i = 0; i < m.rows(); ++i) {
      if (i == row || is_zero(m(i, col))) continue;
      Rational f = m(i, col);
      for (int j = col; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
    }
    out.pivots.push_back(col);
    ++row;
  }
  out.r = std::move(m);
  return out;
}

int rank(const QMatrix& m) { return static_cast<int>(rref(m).pivots.size()); }

std::vector<QVec> nullspace(const QMatrix& m) {
  Rref e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (int p : e.pivots) is_pivot[p] = true;
  std::vector<QVec> basis;
  for (int f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    QVec v(m.cols());
    v[f] = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.r(static_cast<int>(r), f);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<QVec> solve(const QMatrix& m, const QVec& b) {
  if (static_cast<int>(b.size()) != m.rows()) throw ShapeError("solve rhs length");
  QMatrix aug(m.rows(), m.cols() + 1);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  Rref e = rref(aug);
  if (!e.pivots.empty() && e.pivots.back() == m.cols()) return std::nullopt;
  QVec x(m.cols());
  for (std::size_t r = 0; r < e.pivots.size(); ++r) x[e.pivots[r]] = e.r(static_cast<int>(r), m.cols());
  return x;
}

QMatrix inverse(const QMatrix& m) {
  if (m.rows() != m.cols()) throw ShapeError("inverse of non-square matrix");
  int n = m.rows();
  Rref e = rref(QMatrix::hcat(m, QMatrix::identity(n)));
  if (static_cast<int>(e.pivots.size()) < n || (n > 0 && e.pivots[n - 1] != n - 1))
    throw NotInvertible("singular rational matrix");
  QMatrix inv(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv(i, j) = e.r(i, n + j);
  return inv;
}

Rational det(const QMatrix& m0) {
  if (m0.rows() != m0.cols()) throw ShapeError("det of non-square matrix");
  QMatrix m = m0;
  int n = m.rows();
  Rational d = 1;
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int i = c; i < n; ++i)
      if (!is_zero(m(i, c))) {
        piv = i;
        break;
      }
    if (piv < 0) return 0;
    if (piv != c) {
      for (int j = 0; j < n; ++j) std::swap(m(piv, j), m(c, j));
      d = -d;
    }
    d *= m(c, c);
    for (int i = c + 1; i < n; ++i) {
      if (is_zero(m(i, c))) continue;
      Rational f = m(i, c) / m(c, c);
      for (int j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return d;
}

Rational dot(const QVec& a, const QVec& b) {
  if (a.size() != b.size()) throw ShapeError("dot length");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

QVec axpy(const Rational& a, const QVec& x, const QVec& y) {
  if (x.size() != y.size()) throw ShapeError("axpy length");
  QVec out = y;
  for (std::size_t i = 0; i < x.size(); ++i) out[i] += a * x[i];
  return out;
}

bool is_zero(const QVec& v) {
  for (const auto& x : v)
    if (!is_zero(x)) return false;
  return true;
}

std::vector<QVec> span_basis(int dim, const std::vector<QVec>& vs) {
  QMatrix m(static_cast<int>(vs.size()), dim);
  for (int i = 0; i < m.rows(); ++i) {
    if (static_cast<int>(vs[i].size()) != dim) throw ShapeError("span_basis length");
    for (int j = 0; j < dim; ++j) m(i, j) = vs[i][j];
  }
  Rref e = rref(m);
  std::vector<QVec> rows;
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    QVec v(dim);
    for (int j = 0; j < dim; ++j) v[j] = e.r(static_cast<int>(r), j);
    rows.push_back(std::move(v));
  }
  return rows;
}

bool same_span(int dim, const std::vector<QVec>& a, const std::vector<QVec>& b) {
  return span_basis(dim, a) == span_basis(dim, b);
}

}  // namespace homalg
