#include "homalg/polymatrix.hpp"

#include <algorithm>

namespace homalg {

Vec zero_vec(const Base& b, int r) { return Vec(r, b.zero()); }

Vec basis_vec(const Base& b, int r, int k) {
  Vec v = zero_vec(b, r);
  v.at(k) = b.one();
  return v;
}

Vec operator+(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw ShapeError("section sum length");
  Vec c = a;
  for (std::size_t i = 0; i < a.size(); ++i) c[i] += b[i];
  return c;
}

Vec operator-(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw ShapeError("section difference length");
  Vec c = a;
  for (std::size_t i = 0; i < a.size(); ++i) c[i] -= b[i];
  return c;
}

Vec scale(const JetPoly& f, const Vec& v) {
  Vec c = v;
  for (auto& x : c) x = f * x;
  return c;
}

Vec scale(const Rational& q, const Vec& v) {
  Vec c = v;
  for (auto& x : c) x = x * q;
  return c;
}

Vec pull(const Base& b, const Vec& v, int k) {
  Vec c = v;
  for (auto& x : c) x = b.pull(x, k);
  return c;
}

Vec truncated(const Vec& v, int k) {
  Vec c = v;
  for (auto& x : c) x = x.truncated(k);
  return c;
}

bool budget_eq(const Vec& a, const Vec& b, int loss) {
  if (a.size() != b.size()) throw ShapeError("section compare length");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!budget_eq(a[i], b[i], loss)) return false;
  return true;
}

int compare_order(const Vec& a, const Vec& b, int loss) {
  int o = a.empty() ? 0 : a[0].order() - loss;
  for (std::size_t i = 0; i < a.size(); ++i) o = std::min(o, compare_order(a[i], b[i], loss));
  return o;
}

int valid(const Vec& v) {
  int o = v.empty() ? 0 : v[0].order();
  for (const auto& x : v) o = std::min(o, x.valid());
  return o;
}

PolyMatrix::PolyMatrix(int rows, int cols, int m, int d)
    : rows_(rows), cols_(cols), m_(m), d_(d), a_(static_cast<std::size_t>(rows) * cols, JetPoly(m, d)) {}

PolyMatrix PolyMatrix::identity(int n, int m, int d) {
  PolyMatrix p(n, n, m, d);
  for (int i = 0; i < n; ++i) p(i, i) = JetPoly::constant(m, d, 1);
  return p;
}

PolyMatrix PolyMatrix::from_q(const QMatrix& q, int m, int d) {
  PolyMatrix p(q.rows(), q.cols(), m, d);
  for (int i = 0; i < q.rows(); ++i)
    for (int j = 0; j < q.cols(); ++j) p(i, j) = JetPoly::constant(m, d, q(i, j));
  return p;
}

PolyMatrix PolyMatrix::operator*(const PolyMatrix& b) const {
  if (cols_ != b.rows_) throw ShapeError("PolyMatrix product shape");
  PolyMatrix c(rows_, b.cols_, m_, d_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < b.cols_; ++j) {
      JetPoly s(m_, d_);
      for (int k = 0; k < cols_; ++k) s += (*this)(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

Vec PolyMatrix::operator*(const Vec& v) const {
  if (static_cast<int>(v.size()) != cols_) throw ShapeError("PolyMatrix-vector shape");
  Vec out(rows_, JetPoly(m_, d_));
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) out[i] += (*this)(i, k) * v[k];
  return out;
}

PolyMatrix PolyMatrix::operator+(const PolyMatrix& b) const {
  if (rows_ != b.rows_ || cols_ != b.cols_) throw ShapeError("PolyMatrix sum shape");
  PolyMatrix c = *this;
  for (std::size_t i = 0; i < a_.size(); ++i) c.a_[i] += b.a_[i];
  return c;
}

PolyMatrix PolyMatrix::operator-(const PolyMatrix& b) const {
  if (rows_ != b.rows_ || cols_ != b.cols_) throw ShapeError("PolyMatrix difference shape");
  PolyMatrix c = *this;
  for (std::size_t i = 0; i < a_.size(); ++i) c.a_[i] -= b.a_[i];
  return c;
}

PolyMatrix PolyMatrix::scaled(const JetPoly& f) const {
  PolyMatrix c = *this;
  for (auto& x : c.a_) x = f * x;
  return c;
}

PolyMatrix PolyMatrix::scaled(const Rational& q) const {
  PolyMatrix c = *this;
  for (auto& x : c.a_) x = x * q;
  return c;
}

PolyMatrix PolyMatrix::pulled(const Base& b, int k) const {
  PolyMatrix c = *this;
  for (auto& x : c.a_) x = b.pull(x, k);
  return c;
}

PolyMatrix PolyMatrix::truncated(int k) const {
  PolyMatrix c = *this;
  for (auto& x : c.a_) x = x.truncated(k);
  return c;
}

PolyMatrix PolyMatrix::transpose() const {
  PolyMatrix t(cols_, rows_, m_, d_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

QMatrix PolyMatrix::constant_part() const {
  QMatrix q(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) q(i, j) = (*this)(i, j).constant_term();
  return q;
}

bool PolyMatrix::is_invertible() const {
  return rows_ == cols_ && (rows_ == 0 || !homalg::is_zero(det(constant_part())));
}

PolyMatrix PolyMatrix::inverse() const {
  if (rows_ != cols_) throw ShapeError("inverse of non-square PolyMatrix");
  if (!is_invertible()) throw NotInvertible("determinant has zero constant term");
  int n = rows_;
  PolyMatrix a = *this;
  PolyMatrix inv = identity(n, m_, d_);
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int i = col; i < n; ++i)
      if (a(i, col).is_unit()) {
        piv = i;
        break;
      }
    if (piv < 0) throw NotInvertible("no unit pivot");
    if (piv != col)
      for (int j = 0; j < n; ++j) {
        std::swap(a(piv, j), a(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    JetPoly u = jet_inverse(a(col, col));
    for (int j = 0; j < n; ++j) {
      a(col, j) = u * a(col, j);
      inv(col, j) = u * inv(col, j);
    }
    for (int i = 0; i < n; ++i) {
      if (i == col || a(i, col).is_zero()) continue;
      JetPoly f = a(i, col);
      for (int j = 0; j < n; ++j) {
        a(i, j) -= f * a(col, j);
        inv(i, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

bool PolyMatrix::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](const JetPoly& x) { return x.is_zero(); });
}

int PolyMatrix::valid() const {
  int o = d_;
  for (const auto& x : a_) o = std::min(o, x.valid());
  return o;
}

bool budget_eq(const PolyMatrix& a, const PolyMatrix& b, int loss) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("PolyMatrix compare shape");
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (!budget_eq(a(i, j), b(i, j), loss)) return false;
  return true;
}

Vec apply(const Base& b, const Twisted& t, const Vec& s) { return t.M * pull(b, s, t.twist); }

Twisted compose(const Base& b, const Twisted& t, const Twisted& u) {
  return Twisted{t.M * u.M.pulled(b, t.twist), t.twist + u.twist};
}

Twisted inverse(const Base& b, const Twisted& t) {
  return Twisted{t.M.inverse().pulled(b, -t.twist), -t.twist};
}

Twisted operator+(const Twisted& a, const Twisted& b) {
  if (a.twist != b.twist) throw ShapeError("sum of morphisms with different twists");
  return Twisted{a.M + b.M, a.twist};
}

Twisted operator-(const Twisted& a, const Twisted& b) {
  if (a.twist != b.twist) throw ShapeError("difference of morphisms with different twists");
  return Twisted{a.M - b.M, a.twist};
}

Twisted scale(const JetPoly& f, const Twisted& t) { return Twisted{t.M.scaled(f), t.twist}; }
Twisted scale(const Rational& c, const Twisted& t) { return Twisted{t.M.scaled(c), t.twist}; }

bool budget_eq(const Twisted& a, const Twisted& b, int loss) {
  return a.twist == b.twist && budget_eq(a.M, b.M, loss);
}

}  // namespace homalg
