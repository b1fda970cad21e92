#include "homalg/connection.hpp"

namespace homalg {

namespace {

EForm zero_eform(const HomAlgebroid& L, int r, int p) { return EForm(L.rank(), p, zero_vec(L.base(), r)); }

Twisted zero_twisted(const Base& b, int r, int twist) { return Twisted{PolyMatrix(r, r, b.vars(), b.order()), twist}; }

void check_pair(const HomBundle& E, const HomAlgebroid& L) {
  if (&E.base() != &L.base() && !(E.base().phi().components() == L.base().phi().components()))
    throw ShapeError("bundle and algebroid live over different bases");
}

}  // namespace

Connection trivial_connection(std::shared_ptr<const HomBundle> E, std::shared_ptr<const HomAlgebroid> L) {
  check_pair(*E, *L);
  Connection c;
  const Base& b = E->base();
  c.A.assign(L->rank(), PolyMatrix(E->rank(), E->rank(), b.vars(), b.order()));
  c.E = std::move(E);
  c.L = std::move(L);
  return c;
}

MForm alpha_form(const Connection& c) {
  const Base& b = c.base();
  int r = c.E->rank();
  MForm w(c.L->rank(), 1, zero_twisted(b, r, c.twist));
  for (int j = 0; j < c.L->rank(); ++j) w.c[j] = Twisted{c.A[j], c.twist};
  return w;
}

Connection with_alpha(const Connection& c, const MForm& alpha) {
  if (alpha.p != 1 || alpha.n != c.L->rank()) throw ShapeError("alpha must be a 1-form on L");
  Connection out = c;
  out.twist = alpha.zero.twist;
  for (int j = 0; j < alpha.n; ++j) {
    if (alpha.c[j].twist != out.twist) throw ShapeError("alpha components with different twists");
    out.A[j] = alpha.c[j].M;
  }
  return out;
}

Section conn_at(const Connection& c, const Section& s, int j) {
  const HomAlgebroid& L = *c.L;
  const Base& b = c.base();
  int r = c.E->rank();
  if (static_cast<int>(s.size()) != r) throw ShapeError("conn_at: section rank");
  Vec da(r, b.zero());
  LSection ej = L.basis(j);
  for (int k = 0; k < r; ++k) da[k] = anchor_act(L, ej, s[k]);
  Section out = c.E->phiE_matrix() * da;
  return out + c.A[j] * pull(b, s, c.twist);
}

EForm conn_apply(const Connection& c, const Section& s) {
  EForm w = zero_eform(*c.L, c.E->rank(), 1);
  for (int j = 0; j < c.L->rank(); ++j) w.c[j] = conn_at(c, s, j);
  return w;
}

Section covariant_derivative(const Connection& c, const LSection& xi, const Section& s) {
  return conn_apply(c, s).eval({phiL_apply(*c.L, xi)});
}

Section phi_twist_eval(const HomBundle& E, const HomAlgebroid& L, const EForm& w, const std::vector<LSection>& ys) {
  std::vector<LSection> pre;
  for (const auto& y : ys) pre.push_back(phiL_inv_apply(L, y));
  return apply(E.base(), E.phiE(), w.eval(pre));
}

EForm phi_twist(const HomBundle& E, const HomAlgebroid& L, const EForm& w) {
  EForm out = w;
  for (const auto& I : tuples(w.n, w.p)) {
    std::vector<LSection> pre;
    for (int i : I) pre.push_back(L.phiL_inv_basis(i));
    out[I] = apply(E.base(), E.phiE(), w.eval(pre));
  }
  return out;
}

EForm phi_twist_inv(const HomBundle& E, const HomAlgebroid& L, const EForm& w) {
  EForm out = w;
  for (const auto& I : tuples(w.n, w.p)) {
    std::vector<LSection> args;
    for (int i : I) args.push_back(L.phiL_basis(i));
    out[I] = apply(E.base(), E.phiE_inv(), w.eval(args));
  }
  return out;
}

MForm phi_twist(const HomBundle& E, const HomAlgebroid& L, const MForm& w) {
  MForm out = w;
  out.zero.twist += 1;
  for (const auto& I : tuples(w.n, w.p)) {
    std::vector<LSection> pre;
    for (int i : I) pre.push_back(L.phiL_inv_basis(i));
    Twisted v = w.eval(pre);
    if (v.M.is_zero()) v.twist = w.zero.twist;
    out[I] = compose(E.base(), E.phiE(), v);
  }
  return out;
}

MForm phi_twist_inv(const HomBundle& E, const HomAlgebroid& L, const MForm& w) {
  MForm out = w;
  out.zero.twist -= 1;
  for (const auto& I : tuples(w.n, w.p)) {
    std::vector<LSection> args;
    for (int i : I) args.push_back(L.phiL_basis(i));
    Twisted v = w.eval(args);
    if (v.M.is_zero()) v.twist = w.zero.twist;
    out[I] = compose(E.base(), E.phiE_inv(), v);
  }
  return out;
}

EForm d_nabla(const Connection& c, const EForm& w) {
  const HomAlgebroid& L = *c.L;
  const HomBundle& E = *c.E;
  int n = w.n, p = w.p;
  EForm out = zero_eform(L, E.rank(), p + 1);
  for (const auto& I : tuples(n, p + 1)) {
    Section v = out.zero;
    for (int k = 0; k <= p; ++k) {
      std::vector<LSection> args;
      for (int l = 0; l <= p; ++l)
        if (l != k) args.push_back(L.phiL_inv_basis(I[l]));
      Section t = conn_at(c, w.eval(args), I[k]);
      v = (k % 2 == 0) ? v + t : v - t;
    }
    for (int k = 0; k <= p; ++k)
      for (int l = k + 1; l <= p; ++l) {
        std::vector<LSection> args{bracket(L, L.phiL_inv_basis(I[k]), L.phiL_inv_basis(I[l]))};
        for (int s = 0; s <= p; ++s)
          if (s != k && s != l) args.push_back(L.basis(I[s]));
        Section t = phi_twist_eval(E, L, w, args);
        v = ((k + l) % 2 == 0) ? v + t : v - t;
      }
    out[I] = v;
  }
  return out;
}

EForm end_connection_eval(const Connection& c, const Twisted& T, const Section& s) {
  const HomBundle& E = *c.E;
  const HomAlgebroid& L = *c.L;
  const Base& b = E.base();
  Twisted pi = E.phiE_inv();
  Section inner = apply(b, pi, apply(b, T, apply(b, pi, s)));
  EForm first = phi_twist(E, L, conn_apply(c, inner));
  EForm second = conn_apply(c, apply(b, pi, s));
  for (auto& v : second.c) v = apply(b, T, apply(b, pi, v));
  return first - phi_twist(E, L, second);
}

MForm end_connection_apply(const Connection& c, const Twisted& T) {
  const HomBundle& E = *c.E;
  const Base& b = E.base();
  int r = E.rank(), n = c.L->rank();
  MForm out(n, 1, zero_twisted(b, r, T.twist));
  for (int j = 0; j < n; ++j) out.c[j] = zero_twisted(b, r, T.twist);
  for (int k = 0; k < r; ++k) {
    EForm v = end_connection_eval(c, T, E.basis_section(k));
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < r; ++i) out.c[j].M(i, k) = v.c[j][i];
  }
  return out;
}

MForm ad_alpha(const Connection& c, const Twisted& T) {
  const HomBundle& E = *c.E;
  const HomAlgebroid& L = *c.L;
  MForm a = alpha_form(c);
  int twist = a.zero.twist + T.twist - 1;
  MForm out(L.rank(), 1, zero_twisted(E.base(), E.rank(), twist));
  for (int j = 0; j < L.rank(); ++j) {
    Twisted aj = a.eval({L.phiL_inv_basis(j)});
    aj.twist = a.zero.twist;
    out.c[j] = end_bracket(E, aj, T);
  }
  return out;
}

ValidationReport validate_connection(const Connection& c, int loss) {
  const HomBundle& E = *c.E;
  const HomAlgebroid& L = *c.L;
  const Base& b = E.base();
  int d = b.order();
  ValidationReport rep;
  auto sections = E.monomial_sections();
  auto label = [&](const JetPoly& f, const Section& s) {
    std::string out = "f=" + to_string(f) + ",s=(";
    for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + to_string(s[i]);
    return out + ")";
  };
  Connection c0 = trivial_connection(c.E, c.L);
  {
    Tally t("connection_leibniz", d - loss);
    for (const auto& e : b.basis()) {
      JetPoly f = JetPoly::monomial(b.vars(), d, e);
      SForm f0(L.rank(), 0, b.zero());
      f0.c[0] = f;
      SForm df = d_L(L, f0);
      for (const auto& s : sections) {
        EForm ps(L.rank(), 0, zero_vec(b, E.rank()));
        ps.c[0] = apply(b, E.phiE(), s);
        EForm lhs = conn_apply(c, scale(f, s));
        EForm rhs = wedge(df, ps) + scale(b.pull(f), conn_apply(c, s));
        t.compare(lhs, rhs, loss, label(f, s));
      }
    }
    rep.entries.push_back(t.result());
  }
  {
    Tally t("connection_phi", d - loss);
    for (const auto& s : sections)
      t.compare(phi_twist(E, L, conn_apply(c, s)), conn_apply(c, apply(b, E.phiE(), s)), loss, label(b.one(), s));
    rep.entries.push_back(t.result());
  }
  {
    Tally t("difference_linear", d - loss);
    for (const auto& e : b.basis()) {
      JetPoly f = JetPoly::monomial(b.vars(), d, e);
      for (const auto& s : sections) {
        EForm lhs = conn_apply(c, scale(f, s)) - conn_apply(c0, scale(f, s));
        EForm rhs = scale(b.pull(f), conn_apply(c, s) - conn_apply(c0, s));
        t.compare(lhs, rhs, loss, label(f, s));
      }
    }
    rep.entries.push_back(t.result());
  }
  return rep;
}

}  // namespace homalg
