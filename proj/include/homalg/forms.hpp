#pragma once

#include <functional>
#include <vector>

#include "homalg/polymatrix.hpp"

namespace homalg {

using Tuple = std::vector<int>;

/// Strictly increasing p-tuples from {0..n-1}, lexicographic.
const std::vector<Tuple>& tuples(int n, int p);
int tuple_index(int n, const Tuple& sorted);
/// Sorts idx in place; returns the permutation sign, or 0 on a repeated index.
int sort_sign(std::vector<int>& idx);
/// All permutations of {0..k-1} with their signs.
const std::vector<std::pair<std::vector<int>, int>>& permutations(int k);
long factorial(int k);

inline JetPoly scale(const JetPoly& f, const JetPoly& g) { return f * g; }
inline JetPoly scale(const Rational& c, const JetPoly& g) { return g * c; }

/// Alternating A-multilinear form of degree p on a rank-n algebroid, stored on sorted tuples.
template <class V>
struct Form {
  int n = 0;
  int p = 0;
  V zero{};
  std::vector<V> c;

  Form() = default;
  Form(int n_, int p_, V z) : n(n_), p(p_), zero(z), c(tuples(n_, p_).size(), z) {}

  V& operator[](const Tuple& sorted) { return c.at(tuple_index(n, sorted)); }
  const V& operator[](const Tuple& sorted) const { return c.at(tuple_index(n, sorted)); }

  /// Value on basis sections e_{idx[0]}, ..., e_{idx[p-1]} in any order.
  V on_basis(std::vector<int> idx) const {
    int s = sort_sign(idx);
    if (s == 0) return zero;
    const V& v = (*this)[idx];
    return s > 0 ? v : scale(Rational(-1), v);
  }

  /// Value on arbitrary sections, by A-multilinearity.
  V eval(const std::vector<Vec>& xs) const {
    if (static_cast<int>(xs.size()) != p) throw ShapeError("form evaluated with wrong arity");
    V acc = zero;
    std::vector<int> idx(p);
    std::function<void(int, const JetPoly*)> rec = [&](int k, const JetPoly* coef) {
      if (k == p) {
        V v = on_basis(idx);
        acc = acc + (coef ? scale(*coef, v) : v);
        return;
      }
      for (int j = 0; j < n; ++j) {
        const JetPoly& g = xs[k].at(j);
        if (g.is_zero()) continue;
        idx[k] = j;
        if (coef) {
          JetPoly prod = *coef * g;
          rec(k + 1, &prod);
        } else {
          rec(k + 1, &g);
        }
      }
    };
    rec(0, nullptr);
    return acc;
  }

  Form operator+(const Form& o) const {
    Form r = *this;
    for (std::size_t i = 0; i < c.size(); ++i) r.c[i] = r.c[i] + o.c.at(i);
    return r;
  }
  Form operator-(const Form& o) const {
    Form r = *this;
    for (std::size_t i = 0; i < c.size(); ++i) r.c[i] = r.c[i] - o.c.at(i);
    return r;
  }
};

using SForm = Form<JetPoly>;
using EForm = Form<Vec>;
using MForm = Form<Twisted>;

template <class V>
Form<V> scale(const JetPoly& f, const Form<V>& w) {
  Form<V> r = w;
  for (auto& v : r.c) v = scale(f, v);
  return r;
}

template <class V, class F>
auto map_form(const Form<V>& w, F fn) {
  using W = decltype(fn(w.zero));
  Form<W> r(w.n, w.p, fn(w.zero));
  for (std::size_t i = 0; i < w.c.size(); ++i) r.c[i] = fn(w.c[i]);
  return r;
}

/// Scalar form wedge V-valued form (shuffle sum; equals the 1/(p!q!) permutation sum).
template <class V>
Form<V> wedge(const SForm& a, const Form<V>& b) {
  if (a.n != b.n) throw ShapeError("wedge of forms on different algebroids");
  int n = a.n, p = a.p, q = b.p;
  Form<V> r(n, p + q, b.zero);
  if (p + q > n) return r;
  for (const auto& K : tuples(n, p + q)) {
    V acc = b.zero;
    for (const auto& I : tuples(p + q, p)) {
      std::vector<int> order, Ival, Jval;
      std::vector<bool> inI(p + q, false);
      for (int i : I) inI[i] = true;
      for (int i = 0; i < p + q; ++i) (inI[i] ? Ival : Jval).push_back(K[i]);
      order = I;
      for (int i = 0; i < p + q; ++i)
        if (!inI[i]) order.push_back(i);
      int sgn = sort_sign(order);
      V term = scale(a[Ival], b[Jval]);
      acc = acc + (sgn > 0 ? term : scale(Rational(-1), term));
    }
    r[K] = acc;
  }
  return r;
}

template <class V, class Eq>
bool forms_equal(const Form<V>& a, const Form<V>& b, Eq eq) {
  if (a.n != b.n || a.p != b.p) return false;
  for (std::size_t i = 0; i < a.c.size(); ++i)
    if (!eq(a.c[i], b.c[i])) return false;
  return true;
}

inline bool budget_eq(const SForm& a, const SForm& b, int loss) {
  return forms_equal(a, b, [&](const JetPoly& x, const JetPoly& y) { return budget_eq(x, y, loss); });
}
inline bool budget_eq(const EForm& a, const EForm& b, int loss) {
  return forms_equal(a, b, [&](const Vec& x, const Vec& y) { return budget_eq(x, y, loss); });
}
inline bool budget_eq(const MForm& a, const MForm& b, int loss) {
  return forms_equal(a, b, [&](const Twisted& x, const Twisted& y) { return budget_eq(x, y, loss); });
}

}  // namespace homalg
