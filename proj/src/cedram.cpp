#include "homalg/cedram.hpp"

namespace homalg {

SForm d_L(const HomAlgebroid& L, const SForm& w) {
  int n = w.n, p = w.p;
  SForm out(n, p + 1, L.base().zero());
  for (const auto& I : tuples(n, p + 1)) {
    JetPoly v = L.base().zero();
    for (int k = 0; k <= p; ++k) {
      std::vector<LSection> args;
      for (int l = 0; l <= p; ++l)
        if (l != k) args.push_back(L.phiL_inv_basis(I[l]));
      JetPoly t = anchor_act(L, L.basis(I[k]), w.eval(args));
      v = (k % 2 == 0) ? v + t : v - t;
    }
    for (int k = 0; k <= p; ++k)
      for (int l = k + 1; l <= p; ++l) {
        std::vector<LSection> args{bracket(L, L.phiL_inv_basis(I[k]), L.phiL_inv_basis(I[l]))};
        for (int s = 0; s <= p; ++s)
          if (s != k && s != l) args.push_back(L.basis(I[s]));
        JetPoly t = phi_dagger_eval(L, w, args);
        v = ((k + l) % 2 == 0) ? v + t : v - t;
      }
    out[I] = v;
  }
  return out;
}

SForm d_squared_residual(const HomAlgebroid& L, const SForm& w) { return d_L(L, d_L(L, w)); }

namespace {

Twisted zero_twisted(const Base& b, int r, int twist) {
  return Twisted{PolyMatrix(r, r, b.vars(), b.order()), twist};
}

}  // namespace

Twisted end_bracket(const HomBundle& E, const Twisted& w, const Twisted& t) {
  const Base& b = E.base();
  Twisted pe = E.phiE(), pi = E.phiE_inv();
  Twisted a = compose(b, compose(b, compose(b, compose(b, pe, w), pi), t), pi);
  Twisted c = compose(b, compose(b, compose(b, compose(b, pe, t), pi), w), pi);
  return a - c;
}

MForm wedge_end(const HomBundle& E, const MForm& w, const MForm& t) {
  const Base& b = E.base();
  if (w.n != t.n) throw ShapeError("wedge_end: forms on different algebroids");
  int n = w.n, p = w.p, q = t.p;
  int twist = w.zero.twist + t.zero.twist - 1;
  MForm out(n, p + q, zero_twisted(b, E.rank(), twist));
  if (p + q > n) return out;
  Rational norm(1, factorial(p) * factorial(q));
  for (const auto& K : tuples(n, p + q)) {
    Twisted acc = out.zero;
    for (const auto& [perm, sgn] : permutations(p + q)) {
      std::vector<int> a, c;
      for (int i = 0; i < p; ++i) a.push_back(K[perm[i]]);
      for (int i = p; i < p + q; ++i) c.push_back(K[perm[i]]);
      Twisted term = compose(b, compose(b, w.on_basis(a), E.phiE_inv()), t.on_basis(c));
      acc = sgn > 0 ? acc + term : acc - term;
    }
    out[K] = scale(norm, acc);
  }
  return out;
}

MForm form_bracket(const HomBundle& E, const HomAlgebroid& L, const MForm& w, const MForm& t) {
  const Base& b = E.base();
  if (w.n != t.n) throw ShapeError("form_bracket: forms on different algebroids");
  int n = w.n, p = w.p, q = t.p;
  int twist = w.zero.twist + t.zero.twist - 1;
  MForm out(n, p + q, zero_twisted(b, E.rank(), twist));
  if (p + q > n) return out;
  Rational norm(1, factorial(p) * factorial(q));
  for (const auto& K : tuples(n, p + q)) {
    Twisted acc = out.zero;
    for (const auto& [perm, sgn] : permutations(p + q)) {
      std::vector<LSection> a, c;
      for (int i = 0; i < p; ++i) a.push_back(L.phiL_inv_basis(K[perm[i]]));
      for (int i = p; i < p + q; ++i) c.push_back(L.phiL_inv_basis(K[perm[i]]));
      Twisted term = end_bracket(E, w.eval(a), t.eval(c));
      acc = sgn > 0 ? acc + term : acc - term;
    }
    out[K] = scale(norm, acc);
  }
  return out;
}

SForm sform_from_coords(const HomAlgebroid& L, int p, int k, const QVec& v) {
  const Base& b = L.base();
  SForm w(L.rank(), p, b.zero());
  std::size_t block = monomials(b.vars(), std::min(k, b.order())).size();
  for (std::size_t t = 0; t < w.c.size(); ++t) w.c[t] = JetPoly::from_coords(b.vars(), b.order(), k, v, t * block);
  return w;
}

QVec sform_coords(const SForm& w, int k) {
  QVec out;
  for (const auto& f : w.c) {
    QVec c = f.coords(k);
    out.insert(out.end(), c.begin(), c.end());
  }
  return out;
}

const QMatrix& dL_matrix(const HomAlgebroid& L, int p, int k) {
  std::string key = "d_L:" + std::to_string(p) + ":" + std::to_string(k);
  return L.cached(key, [&] {
    const Base& b = L.base();
    std::size_t block = monomials(b.vars(), std::min(k, b.order())).size();
    int dom = static_cast<int>(tuples(L.rank(), p).size() * block);
    int cod = static_cast<int>(tuples(L.rank(), p + 1).size() * block);
    QMatrix m(cod, dom);
    for (int j = 0; j < dom; ++j) {
      QVec e(dom);
      e[j] = 1;
      QVec col = sform_coords(d_L(L, sform_from_coords(L, p, k, e)), k);
      for (int i = 0; i < cod; ++i) m(i, j) = col[i];
    }
    return m;
  });
}

}  // namespace homalg
