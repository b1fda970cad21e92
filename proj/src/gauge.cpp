#include "homalg/gauge.hpp"

#include <algorithm>

namespace homalg {

namespace {

std::size_t block(const Base& b, int k) { return monomials(b.vars(), std::min(k, b.order())).size(); }

QMatrix columns(std::size_t rows, const std::vector<QVec>& cols) {
  return QMatrix::from_columns(static_cast<int>(rows), cols);
}

QVec combine(const std::vector<QVec>& basis, const QVec& coef) {
  QVec out(basis.empty() ? 0 : basis[0].size());
  for (std::size_t i = 0; i < basis.size(); ++i) out = axpy(coef[i], basis[i], out);
  return out;
}

}  // namespace

std::size_t twisted_dim(const HomBundle& E, int k) {
  return static_cast<std::size_t>(E.rank()) * E.rank() * block(E.base(), k);
}

QVec twisted_coords(const Twisted& t, int k) {
  QVec out;
  for (int i = 0; i < t.M.rows(); ++i)
    for (int j = 0; j < t.M.cols(); ++j) {
      QVec c = t.M(i, j).coords(k);
      out.insert(out.end(), c.begin(), c.end());
    }
  return out;
}

Twisted twisted_from_coords(const HomBundle& E, int k, const QVec& v, int twist, std::size_t offset) {
  const Base& b = E.base();
  int r = E.rank();
  std::size_t blk = block(b, k);
  Twisted t{PolyMatrix(r, r, b.vars(), b.order()), twist};
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      t.M(i, j) = JetPoly::from_coords(b.vars(), b.order(), k, v, offset + (static_cast<std::size_t>(i) * r + j) * blk);
  return t;
}

QVec mform_coords(const MForm& w, int k) {
  QVec out;
  for (const auto& t : w.c) {
    QVec c = twisted_coords(t, k);
    out.insert(out.end(), c.begin(), c.end());
  }
  return out;
}

MForm mform_from_coords(const HomBundle& E, int n, int p, int k, const QVec& v, int twist) {
  const Base& b = E.base();
  MForm w(n, p, Twisted{PolyMatrix(E.rank(), E.rank(), b.vars(), b.order()), twist});
  std::size_t dim = twisted_dim(E, k);
  for (std::size_t i = 0; i < w.c.size(); ++i) w.c[i] = twisted_from_coords(E, k, v, twist, i * dim);
  return w;
}

int working_order(const Base& b, int loss) { return std::max(b.order() - loss, 0); }

QMatrix end_phiE_condition(const HomBundle& E, int k) {
  const Base& b = E.base();
  std::size_t dim = twisted_dim(E, k);
  std::vector<QVec> cols;
  for (std::size_t j = 0; j < dim; ++j) {
    QVec e(dim);
    e[j] = 1;
    Twisted T = twisted_from_coords(E, k, e);
    Twisted diff = compose(b, T, E.phiE()) - compose(b, E.phiE(), T);
    cols.push_back(twisted_coords(diff, k));
  }
  return columns(dim, cols);
}

std::vector<QVec> end_phiE_basis(const HomBundle& E, int k) {
  if (twisted_dim(E, k) == 0) return {};
  return nullspace(end_phiE_condition(E, k));
}

bool is_gauge_element(const HomBundle& E, const Twisted& psi, int loss) {
  return psi.twist == 1 && psi.M.rows() == E.rank() && psi.M.is_invertible() && in_end_phiE(E, psi, loss);
}

Twisted gauge_mul(const HomBundle& E, const Twisted& psi1, const Twisted& psi2) {
  if (psi1.M.rows() != E.rank() || psi2.M.rows() != E.rank()) throw ShapeError("gauge_mul: rank mismatch");
  const Base& b = E.base();
  return compose(b, psi1, compose(b, E.phiE_inv(), psi2));
}

Twisted gauge_inv(const HomBundle& E, const Twisted& psi) {
  const Base& b = E.base();
  return compose(b, E.phiE(), compose(b, inverse(b, psi), E.phiE()));
}

EForm gauge_act_eval(const Connection& c, const Twisted& psi, const Section& s) {
  const HomBundle& E = *c.E;
  const Base& b = E.base();
  Twisted back = compose(b, E.phiE(), inverse(b, psi));
  EForm v = conn_apply(c, apply(b, compose(b, E.phiE_inv(), psi), s));
  for (auto& x : v.c) x = apply(b, back, x);
  return v;
}

Connection gauge_act(const Twisted& psi, const Connection& c) {
  if (c.twist != 1) throw ShapeError("gauge action needs a phi*-twisted connection");
  if (psi.twist != 1) throw ShapeError("gauge element must be phi*-twisted");
  const HomBundle& E = *c.E;
  Connection out = trivial_connection(c.E, c.L);
  Connection c0 = out;
  for (int k = 0; k < E.rank(); ++k) {
    Section bk = E.basis_section(k);
    EForm v = gauge_act_eval(c, psi, bk) - conn_apply(c0, bk);
    for (int j = 0; j < c.L->rank(); ++j)
      for (int i = 0; i < E.rank(); ++i) out.A[j](i, k) = v.c[j][i];
  }
  return out;
}

MForm gauge_alpha_closed_form(const Twisted& psi, const Connection& c) {
  const HomBundle& E = *c.E;
  const HomAlgebroid& L = *c.L;
  const Base& b = E.base();
  Connection c0 = trivial_connection(c.E, c.L);
  Twisted pinv = gauge_inv(E, psi);
  Twisted left = compose(b, pinv, E.phiE_inv());
  MForm x = phi_twist_inv(E, L, end_connection_apply(c0, psi));
  MForm a = alpha_form(c);
  MForm out = a;
  for (int j = 0; j < L.rank(); ++j) {
    Twisted t1 = compose(b, left, compose(b, x.c[j], E.phiE()));
    Twisted t2 = compose(b, left, compose(b, a.c[j], compose(b, E.phiE_inv(), psi)));
    out.c[j] = t1 + t2;
  }
  return out;
}

bool same_connection(const Connection& a, const Connection& b, int loss) {
  if (a.twist != b.twist || a.A.size() != b.A.size()) return false;
  for (std::size_t j = 0; j < a.A.size(); ++j)
    if (!budget_eq(a.A[j], b.A[j], loss)) return false;
  return true;
}

QMatrix end_connection_matrix(const Connection& c, int k) {
  const HomBundle& E = *c.E;
  std::size_t dim = twisted_dim(E, k);
  std::size_t cod = dim * c.L->rank();
  std::vector<QVec> cols;
  for (std::size_t j = 0; j < dim; ++j) {
    QVec e(dim);
    e[j] = 1;
    cols.push_back(mform_coords(end_connection_apply(c, twisted_from_coords(E, k, e)), k));
  }
  return columns(cod, cols);
}

EndKernel end_kernel(const Connection& c, int loss) {
  const HomBundle& E = *c.E;
  EndKernel out;
  out.order = working_order(E.base(), loss);
  int k = out.order;
  if (twisted_dim(E, k) == 0) return out;
  QMatrix D = end_connection_matrix(c, k);
  out.coords = nullspace(D);
  for (const auto& v : out.coords) out.basis.push_back(twisted_from_coords(E, k, v));
  if (!out.coords.empty()) {
    QMatrix K = columns(twisted_dim(E, k), out.coords);
    for (const auto& a : nullspace(end_phiE_condition(E, k) * K)) out.phiE_coords.push_back(combine(out.coords, a));
  }
  for (const auto& v : out.phiE_coords) out.phiE_basis.push_back(twisted_from_coords(E, k, v));
  return out;
}

bool is_irreducible(const Connection& c, int loss) { return end_kernel(c, loss).basis.size() == 1; }

IsotropySearch brute_force_isotropy(const Connection& c, int max_dim, int loss) {
  const HomBundle& E = *c.E;
  IsotropySearch out;
  int k = working_order(E.base(), loss);
  std::vector<QVec> pool = end_phiE_basis(E, k);
  if (static_cast<int>(pool.size()) > max_dim) pool = end_kernel(c, loss).phiE_coords;
  out.pool_dim = static_cast<int>(pool.size());
  if (out.pool_dim > max_dim) return out;
  out.feasible = true;
  QVec id = twisted_coords(E.phiE(), k);
  const Rational digits[] = {-1, 0, 1, 2};
  std::vector<int> idx(pool.size(), 0);
  out.scalars_only = true;
  while (true) {
    QVec coef(pool.size());
    bool nonzero = false;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      coef[i] = digits[idx[i]];
      nonzero = nonzero || !is_zero(coef[i]);
    }
    if (nonzero) {
      QVec v = combine(pool, coef);
      Twisted psi = twisted_from_coords(E, k, v);
      if (psi.M.is_invertible()) {
        ++out.candidates;
        if (same_connection(gauge_act(psi, c), c, loss)) {
          out.fixers.push_back(psi);
          if (rank(columns(v.size(), {v, id})) > 1) out.scalars_only = false;
        }
      }
    }
    std::size_t pos = 0;
    while (pos < idx.size() && ++idx[pos] == 4) idx[pos++] = 0;
    if (pos == idx.size()) break;
  }
  return out;
}

std::vector<Twisted> orbit_solutions(const Connection& c1, const Connection& c2, int loss) {
  const HomBundle& E = *c1.E;
  const Base& b = E.base();
  int k = working_order(b, loss);
  std::vector<QVec> dom = end_phiE_basis(E, k);
  if (dom.empty()) return {};
  std::vector<QVec> cols;
  for (const auto& v : dom) {
    Twisted psi = twisted_from_coords(E, k, v);
    MForm lam(c1.L->rank(), 1, Twisted{PolyMatrix(E.rank(), E.rank(), b.vars(), b.order()), 1});
    for (auto& t : lam.c) t = lam.zero;
    for (int s = 0; s < E.rank(); ++s) {
      Section bs = E.basis_section(s);
      EForm lhs = conn_apply(c1, apply(b, compose(b, E.phiE_inv(), psi), bs));
      EForm rhs = conn_apply(c2, bs);
      for (auto& x : rhs.c) x = apply(b, compose(b, psi, E.phiE_inv()), x);
      EForm diff = lhs - rhs;
      for (int j = 0; j < c1.L->rank(); ++j)
        for (int i = 0; i < E.rank(); ++i) lam.c[j].M(i, s) = diff.c[j][i];
    }
    cols.push_back(mform_coords(lam, k));
  }
  QMatrix M = columns(cols[0].size(), cols);
  std::vector<Twisted> out;
  for (const auto& a : nullspace(M)) out.push_back(twisted_from_coords(E, k, combine(dom, a)));
  return out;
}

std::optional<Twisted> find_gauge_transform(const Connection& c1, const Connection& c2, int loss) {
  const HomBundle& E = *c1.E;
  const Base& b = E.base();
  std::vector<Twisted> sols = orbit_solutions(c1, c2, loss);
  if (sols.empty()) return std::nullopt;
  auto accept = [&](const Twisted& psi) {
    return psi.M.is_invertible() && same_connection(gauge_act(psi, c1), c2, loss);
  };
  for (const auto& s : sols)
    if (accept(s)) return s;
  // Invertible elements form a Zariski-open part of the solution space, so generic
  // small-integer combinations find one when it exists.
  std::size_t tries = 4 * sols.size() + static_cast<std::size_t>(E.rank()) * b.basis().size() + 16;
  unsigned long long state = 0x9e3779b97f4a7c15ULL;
  for (std::size_t t = 0; t < tries; ++t) {
    Twisted psi = scale(Rational(0), sols[0]);
    for (const auto& s : sols) {
      state = state * 6364136223846793005ULL + 1442695040888963407ULL;
      psi = psi + scale(Rational(static_cast<long>((state >> 33) % 7) - 3), s);
    }
    if (accept(psi)) return psi;
  }
  return std::nullopt;
}

}  // namespace homalg
