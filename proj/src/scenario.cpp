#include <chrono>
#include <functional>
#include <map>
#include <random>

#include "homalg/scenario.hpp"

namespace homalg {

Losses Config::losses() const {
  Losses l;
  if (loss_override) l.bracket = l.jacobi = l.representation = l.d_squared = l.connection = *loss_override;
  return l;
}

const std::vector<std::pair<std::string, std::string>>& anchor_table() {
  static const std::vector<std::pair<std::string, std::string>> table = {
      {"field.exact", "the notation $\\mathbb{K}$ for the field"},
      {"jet.ring_axioms", "the ring of smooth functions"},
      {"jet.pullback_morphism", "there is a canonical morphism (pullback)"},
      {"jet.invertibility", "the morphism $\\phi$ is diffeomorphism and $\\phi_E$ is an invertible"},
      {"jet.twisted_derivation", "can be considered as a $(\\phi^\\star,\\phi^\\star)$-derivation"},
      {"cedram.d0", "induced from the de Rham operator"},
      {"bundle.structure", "said to have a Hom-bundle structure"},
      {"bundle.invertible", "said to be an invertible Hom-bundle"},
      {"bundle.twisted_linearity", "The space of global sections is"},
      {"bundle.ad_roundtrip", "with a canonical morphism $\\text{Ad}_{\\phi_E}"},
      {"bundle.end_phiE_stability", "respecting the Hom-bundle structure is"},
      {"bundle.phi_dagger", "there is a canonical map"},
      {"algebroid.bracket", "a skew-symmetric bilinear map"},
      {"algebroid.leibniz", "acts on $f$ as in Remark"},
      {"algebroid.representation", "is a representation of the Hom-Lie algebra"},
      {"algebroid.hom_lie_rep", "A representation of a Hom-Lie algebra"},
      {"algebroid.anchor", "called the anchor map"},
      {"algebroid.lie_derivative", "the Hom-Lie derivative operator"},
      {"algebroid.insertion", "the Hom-Insertion operator"},
      {"cedram.antisymmetry", "whose elements are called smooth $\\la{L}$-forms"},
      {"cedram.leibniz", "can be extended to higher exterior powers"},
      {"cedram.d_squared", "it is easy to observe that"},
      {"cedram.phi_dagger_commutes", "called {\\bf Hom-Chevalley-Eilenberg-de Rham} complex"},
      {"cedram.wedge_assoc", "wedge product as multiplication operation"},
      {"cedram.bracket_jacobi", "Hom-Lie algebra structure with the Hom-Lie bracket"},
      {"connection.validate", "called a Hom-Lie algebroid connection"},
      {"connection.trivial", "be the trivial $\\la{L}$-connection"},
      {"connection.covariant", "co-variant $\\la{L}$-differential operator in the direction"},
      {"connection.d_nabla_degree0", "The operator $d^\\nabla$ is given by"},
      {"connection.laws", "uniquely determined such that"},
      {"connection.affine", "is an affine space modeled on the vector space"},
      {"connection.end_connection", "induces an $\\la{L}$-connection"},
      {"connection.end_product", "and a Hom-Lie algebroid connection $\\nabla^E$"},
      {"gauge.group", "which we will call the Hom-Gauge group"},
      {"gauge.inverse", "there is a unique element"},
      {"gauge.well_defined", "implies the map $\\odot$ is well defined"},
      {"gauge.action_law", "the map $\\odot$ is a left action of"},
      {"gauge.closed_form", "the transformed connection $\\nabla^\\psi$"},
      {"gauge.alpha_in_end", "And, we can write"},
      {"gauge.isotropy_conjugation", "closed under the action of $\\text{H-Gau}(E)$"},
      {"gauge.scalars", "define the reduced H-Gauge group"},
      {"gauge.kernel_contains_phiE", "is called an irreducible $\\la{L}$-connection"},
      {"gauge.lemma", "The following statements are equivalent"},
      {"gauge.orbit", "then we need to show"},
      {"slice.metric", "said to have Hom-Hermitian"},
      {"slice.ad_alpha", "order 0, degree 1 differential operator"},
      {"slice.adjoint", "gives a ses-quilinear map"},
      {"slice.laplacian", "is a Fredholm operator"},
      {"slice.decomposition", "following $L^2$-orthogonal decomposition"},
      {"slice.tangent", "has the tangent space"},
      {"slice.gau0", "where $\\phi_E^\\star$ is adjoint operator"},
      {"slice.local_slice", "is smooth and a local diffeomorphism"},
  };
  return table;
}

namespace {

struct Ctx {
  const Scenario& s;
  const Config& cfg;
  Losses loss;
  std::mt19937 rng;
  const Base& b;
  const HomBundle& E;
  const HomAlgebroid& L;
  int d;
  int k;  // working order at the connection loss
  Named<Connection> valid;
  std::vector<std::string> skipped;

  Ctx(const Scenario& sc, const Config& c)
      : s(sc), cfg(c), loss(c.losses()), rng(c.seed), b(*sc.base), E(*sc.E), L(*sc.L), d(sc.base->order()),
        k(working_order(*sc.base, c.losses().connection)) {
    for (const auto& [name, conn] : s.connections) {
      if (conn.twist == 1 && validate_connection(conn, loss.connection).ok())
        valid.emplace_back(name, conn);
      else
        skipped.push_back(name);
    }
  }

  int pick(int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<unsigned>(hi - lo + 1)); }

  Rational rq() {
    static const char* pool[] = {"-2", "-1", "0", "1", "2", "1/2", "-1/3"};
    return parse_rational(pool[pick(0, 6)]);
  }

  JetPoly rjet(int maxdeg) {
    JetPoly f = b.zero();
    for (const auto& e : b.basis())
      if (total_degree(e) <= maxdeg && pick(0, 1)) f += JetPoly::monomial(b.vars(), d, e, rq());
    return f;
  }

  Vec rvec(int len, int maxdeg) {
    Vec v(len, b.zero());
    for (auto& f : v) f = rjet(maxdeg);
    return v;
  }

  SForm rsform(int p, int maxdeg) {
    SForm w(L.rank(), p, b.zero());
    for (auto& f : w.c) f = rjet(maxdeg);
    return w;
  }

  Twisted rend(int order) {
    QVec v(twisted_dim(E, order));
    for (auto& x : v) x = rq();
    return twisted_from_coords(E, order, v);
  }

  MForm rmform(int p, int order) {
    MForm w(L.rank(), p, Twisted{PolyMatrix(E.rank(), E.rank(), b.vars(), d), 1});
    for (auto& t : w.c) t = rend(order);
    return w;
  }

  /// Invertible element of End_phiE at order `order`: random basis combination plus a multiple of phi_E.
  Twisted rphiE(int order) {
    auto basis = end_phiE_basis(E, order);
    for (int attempt = 0;; ++attempt) {
      QVec v(twisted_dim(E, order));
      for (const auto& bv : basis) v = axpy(Rational(pick(-1, 1)), bv, v);
      Twisted t = twisted_from_coords(E, order, v) + scale(Rational(pick(1, 3)), E.phiE());
      if (t.M.is_invertible() || attempt > 20) return t;
    }
  }

  std::vector<JetPoly> monos() const {
    std::vector<JetPoly> out;
    for (const auto& e : b.basis()) out.push_back(JetPoly::monomial(b.vars(), d, e));
    return out;
  }

  /// Named gauges that are gauge elements, followed by `extra` random ones.
  Named<Twisted> gauges(int extra) {
    Named<Twisted> out;
    for (const auto& g : s.gauges)
      if (is_gauge_element(E, g.second, 0)) out.push_back(g);
    for (int i = 0; i < extra; ++i) {
      Twisted t = rphiE(d);
      if (is_gauge_element(E, t, 0)) out.emplace_back("random" + std::to_string(i), t);
    }
    return out;
  }
};

std::string sec_label(const Vec& s) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + to_string(s[i]);
  return out + ")";
}

CheckResult merge(std::vector<std::pair<std::string, CheckResult>> parts, int fallback_order) {
  CheckResult out;
  out.order = fallback_order;
  bool first = true;
  for (auto& [label, c] : parts) {
    out.order = first ? c.order : std::min(out.order, c.order);
    first = false;
    if (!c.pass && out.pass) out.residual = c.residual;
    out.pass = out.pass && c.pass;
    if (!c.detail.empty() || !c.pass) {
      std::string piece = label + (c.pass ? ": " : " FAILED: ") + c.detail;
      out.detail = out.detail.empty() ? piece : out.detail + "; " + piece;
    }
  }
  return out;
}

SForm zero_form_of(const HomAlgebroid& L, const JetPoly& f) {
  SForm w(L.rank(), 0, L.base().zero());
  w.c[0] = f;
  return w;
}

// ---------------------------------------------------------------- field and jets

CheckResult field_exact(Ctx& x) {
  Tally t("", x.d);
  const char* samples[] = {"-3/2", "2/7", "5", "-1/9", "22/7"};
  for (const char* sa : samples)
    for (const char* sb : samples) {
      Rational a = parse_rational(sa), c = parse_rational(sb);
      Rational q = (a * c) / c;
      t.require(q == a, std::string("(a*b)/b for ") + sa + "," + sb);
      Rational s = a + c - c;
      t.require(s == a && sgn(s.get_den()) > 0, "cancellation");
      Rational g = a / c;
      mpz_class gcd;
      mpz_gcd(gcd.get_mpz_t(), g.get_num().get_mpz_t(), g.get_den().get_mpz_t());
      t.require(gcd == 1, "canonical quotient");
    }
  t.note("GMP rationals, no floating point");
  return t.result();
}

CheckResult jet_ring_axioms(Ctx& x) {
  Tally t("", x.d);
  auto ms = x.monos();
  if (ms.size() > 6) ms.resize(6);
  for (int i = 0; i < x.cfg.draws; ++i) ms.push_back(x.rjet(x.d));
  JetPoly one = x.b.one();
  for (const auto& f : ms) {
    t.compare(f * one, f, 0, "unit");
    for (const auto& g : ms) {
      t.compare(f * g, g * f, 0, "commutative");
      t.compare(f + g, g + f, 0, "additive");
    }
  }
  for (std::size_t i = 0; i + 2 < ms.size(); ++i) {
    const JetPoly &f = ms[i], &g = ms[i + 1], &h = ms[i + 2];
    t.compare((f * g) * h, f * (g * h), 0, "associative");
    t.compare(f * (g + h), f * g + f * h, 0, "distributive");
  }
  return t.result();
}

CheckResult jet_pullback(Ctx& x) {
  Tally t("", x.d);
  auto ms = x.monos();
  for (int i = 0; i < x.cfg.draws; ++i) ms.push_back(x.rjet(x.d));
  t.compare(x.b.pull(x.b.one()), x.b.one(), 0, "phi*(1)");
  for (const auto& f : ms)
    for (const auto& g : ms) {
      t.compare(x.b.pull(f * g), x.b.pull(f) * x.b.pull(g), 0, "multiplicative");
      t.compare(x.b.pull(f + g), x.b.pull(f) + x.b.pull(g), 0, "additive");
    }
  return t.result();
}

CheckResult jet_invertibility(Ctx& x) {
  Tally t("", x.d);
  t.require(x.b.phi().invertible(), "phi linear part");
  for (const auto& f : x.monos()) {
    t.compare(x.b.pull(x.b.pull(f), -1), f, 0, "phi* roundtrip");
    t.compare(x.b.pull(x.b.pull(f, -1)), f, 0, "phi*^-1 roundtrip");
  }
  for (const auto& s : x.E.monomial_sections()) {
    t.compare(apply(x.b, x.E.phiE_inv(), apply(x.b, x.E.phiE(), s)), s, 0, "phi_E roundtrip " + sec_label(s));
    t.compare(apply(x.b, x.E.phiE(), apply(x.b, x.E.phiE_inv(), s)), s, 0, "phi_E roundtrip " + sec_label(s));
  }
  for (int i = 0; i < x.L.rank(); ++i)
    for (const auto& f : x.monos()) {
      Vec xi = scale(f, x.L.basis(i));
      t.compare(phiL_inv_apply(x.L, phiL_apply(x.L, xi)), xi, 0, "phi_L roundtrip");
    }
  t.note("phi_E " + std::string(x.E.phiE_matrix().is_invertible() ? "invertible" : "singular"));
  return t.result();
}

CheckResult jet_twisted_derivation(Ctx& x) {
  Tally t("", x.d - x.loss.bracket);
  auto ms = x.monos();
  for (int i = 0; i < x.L.rank(); ++i) {
    Vec e = x.L.basis(i);
    for (const auto& f : ms)
      for (const auto& g : ms) {
        JetPoly lhs = anchor_act(x.L, e, f * g);
        JetPoly rhs = x.b.pull(f) * anchor_act(x.L, e, g) + x.b.pull(g) * anchor_act(x.L, e, f);
        t.compare(lhs, rhs, x.loss.bracket, "e" + std::to_string(i));
      }
  }
  return t.result();
}

CheckResult cedram_d0(Ctx& x) {
  Tally t("", x.d - x.loss.bracket);
  auto ms = x.monos();
  for (const auto& f : ms) {
    SForm df = d_L(x.L, zero_form_of(x.L, f));
    for (int j = 0; j < x.L.rank(); ++j) t.compare(df.c[j], anchor_act(x.L, x.L.basis(j), f), 0, "d f(e_j)");
    for (const auto& g : ms) {
      SForm lhs = d_L(x.L, zero_form_of(x.L, f * g));
      SForm rhs = scale(x.b.pull(f), d_L(x.L, zero_form_of(x.L, g))) + scale(x.b.pull(g), df);
      t.compare(lhs, rhs, x.loss.bracket, "product rule");
    }
  }
  return t.result();
}

// ---------------------------------------------------------------- bundle

CheckResult bundle_structure(Ctx& x) {
  Tally t("", x.d);
  Twisted pe = x.E.phiE();
  for (int kk = 0; kk < x.E.rank(); ++kk) {
    Vec col(x.E.rank(), x.b.zero());
    for (int i = 0; i < x.E.rank(); ++i) col[i] = x.E.phiE_matrix()(i, kk);
    t.compare(apply(x.b, pe, x.E.basis_section(kk)), col, 0, "frame image");
  }
  auto secs = x.E.monomial_sections();
  for (const auto& f : x.monos())
    for (const auto& s : secs) t.compare(apply(x.b, pe, scale(f, s)), scale(x.b.pull(f), apply(x.b, pe, s)), 0, sec_label(s));
  for (std::size_t i = 0; i + 1 < secs.size(); ++i)
    t.compare(apply(x.b, pe, secs[i] + secs[i + 1]), apply(x.b, pe, secs[i]) + apply(x.b, pe, secs[i + 1]), 0,
              "additive");
  return t.result();
}

CheckResult bundle_invertible(Ctx& x) {
  Tally t("", x.d);
  t.require(x.E.phiE_matrix().is_invertible(), "constant part of phi_E invertible");
  Twisted id{PolyMatrix::identity(x.E.rank(), x.b.vars(), x.d), 0};
  t.require(x.E.phiE_inv().twist == -1, "inverse covers phi^-1");
  t.compare(compose(x.b, x.E.phiE(), x.E.phiE_inv()), id, 0, "phi_E phi_E^-1");
  t.compare(compose(x.b, x.E.phiE_inv(), x.E.phiE()), id, 0, "phi_E^-1 phi_E");
  return t.result();
}

CheckResult bundle_linearity(Ctx& x) {
  Tally t("", x.d);
  std::vector<Twisted> maps;
  for (const auto& g : x.s.gauges) maps.push_back(g.second);
  for (const auto& v : end_phiE_basis(x.E, x.d)) maps.push_back(twisted_from_coords(x.E, x.d, v));
  for (const auto& f : x.monos())
    for (const auto& s : x.E.monomial_sections())
      for (const auto& m : maps)
        t.compare(apply(x.b, m, scale(f, s)), scale(x.b.pull(f), apply(x.b, m, s)), 0, sec_label(s));
  return t.result();
}

CheckResult bundle_ad(Ctx& x) {
  Tally t("", x.d);
  std::vector<Twisted> ts;
  for (const auto& g : x.s.gauges) ts.push_back(g.second);
  for (int i = 0; i < x.cfg.draws; ++i) ts.push_back(x.rend(x.d));
  t.compare(ad_phiE(x.E, x.E.phiE()), x.E.phiE(), 0, "Ad(phi_E)");
  for (const auto& a : ts) {
    t.compare(ad_phiE_inv(x.E, ad_phiE(x.E, a)), a, 0, "roundtrip");
    t.compare(ad_phiE(x.E, ad_phiE_inv(x.E, a)), a, 0, "roundtrip");
  }
  for (std::size_t i = 0; i + 1 < ts.size(); ++i)
    t.compare(ad_phiE(x.E, gauge_mul(x.E, ts[i], ts[i + 1])),
              gauge_mul(x.E, ad_phiE(x.E, ts[i]), ad_phiE(x.E, ts[i + 1])), 0, "multiplicative");
  return t.result();
}

CheckResult bundle_stability(Ctx& x) {
  Tally t("", x.k);
  int loss = x.d - x.k;
  std::vector<Twisted> ts;
  for (const auto& v : end_phiE_basis(x.E, x.k)) ts.push_back(twisted_from_coords(x.E, x.k, v));
  for (const auto& g : x.s.gauges) {
    t.require(in_end_phiE(x.E, g.second, 0), "gauge " + g.first + " commutes with phi_E");
    ts.push_back(g.second);
  }
  for (const auto& a : ts) {
    t.require(in_end_phiE(x.E, ad_phiE(x.E, a), loss), "Ad preserves");
    for (const auto& c : ts) t.require(in_end_phiE(x.E, gauge_mul(x.E, a, c), loss), "closed under product");
  }
  t.note("dim End_phiE = " + std::to_string(end_phiE_basis(x.E, x.k).size()) + " at order " + std::to_string(x.k));
  return t.result();
}

CheckResult bundle_phi_dagger(Ctx& x) {
  Tally t("", x.d);
  int n = x.L.rank();
  for (int i = 0; i < x.cfg.draws; ++i) {
    int p = x.pick(0, n), q = x.pick(0, n - p);
    SForm a = x.rsform(p, x.d), c = x.rsform(q, x.d);
    t.compare(phi_dagger_apply(x.L, wedge(a, c)), wedge(phi_dagger_apply(x.L, a), phi_dagger_apply(x.L, c)), 0,
              "multiplicative");
    JetPoly f = x.rjet(x.d);
    t.compare(phi_dagger_apply(x.L, scale(f, a)), scale(x.b.pull(f), phi_dagger_apply(x.L, a)), 0, "phi*-linear");
  }
  return t.result();
}

// ---------------------------------------------------------------- algebroid

CheckResult algebroid_part(Ctx& x, std::vector<std::string> names) {
  ValidationReport rep = validate_algebroid(x.L, {x.loss.bracket, x.loss.jacobi, x.loss.representation});
  std::vector<std::pair<std::string, CheckResult>> parts;
  for (const auto& n : names) parts.emplace_back(n, *rep.find(n));
  return merge(parts, x.d);
}

CheckResult algebroid_anchor(Ctx& x) {
  Tally t("", x.d);
  auto ms = x.monos();
  for (int j = 0; j < x.L.rank(); ++j)
    for (const auto& f : ms)
      for (const auto& g : ms)
        t.compare(anchor_act(x.L, scale(f, x.L.basis(j)), g), f * anchor_act(x.L, x.L.basis(j), g), 0, "A-linear");
  t.note(x.L.transitive() ? "transitive" : "not transitive");
  return t.result();
}

CheckResult algebroid_lie(Ctx& x) {
  Tally t("", x.d - x.loss.bracket);
  auto ms = x.monos();
  int n = x.L.rank();
  for (int j = 0; j < n; ++j) {
    Vec xi = x.L.basis(j);
    for (const auto& f : ms) {
      SForm lf = lie_derivative(x.L, xi, zero_form_of(x.L, f));
      t.compare(lf.c[0], anchor_act(x.L, phiL_apply(x.L, xi), f), 0, "degree 0");
      for (const auto& g : ms) {
        SForm lhs = lie_derivative(x.L, xi, zero_form_of(x.L, f * g));
        JetPoly rhs = x.b.pull(f) * lie_derivative(x.L, xi, zero_form_of(x.L, g)).c[0] + x.b.pull(g) * lf.c[0];
        t.compare(lhs.c[0], rhs, x.loss.bracket, "twisted derivation");
      }
    }
  }
  for (int i = 0; i < x.cfg.draws && n > 0; ++i) {
    int p = x.pick(0, n);
    SForm a = x.rsform(p, x.d), c = x.rsform(p, x.d);
    Vec xi = x.rvec(n, 1), eta = x.rvec(n, 1);
    t.compare(lie_derivative(x.L, xi, a + c), lie_derivative(x.L, xi, a) + lie_derivative(x.L, xi, c), 0, "additive");
    t.compare(lie_derivative(x.L, xi + eta, a), lie_derivative(x.L, xi, a) + lie_derivative(x.L, eta, a), 0,
              "additive in xi");
  }
  return t.result();
}

CheckResult algebroid_insertion(Ctx& x) {
  Tally t("", x.d);
  int n = x.L.rank();
  for (int i = 0; i < x.cfg.draws && n > 0; ++i) {
    int p = x.pick(1, n);
    SForm w = x.rsform(p, x.d);
    Vec xi = x.rvec(n, x.d);
    JetPoly f = x.rjet(x.d);
    t.compare(insertion(x.L, scale(f, xi), w), scale(x.b.pull(f), insertion(x.L, xi, w)), 0, "phi*-linear in xi");
    JetPoly g = x.rjet(x.d);
    t.compare(insertion(x.L, xi, d_L(x.L, zero_form_of(x.L, g))).c[0], x.b.pull(anchor_act(x.L, xi, g)), 0,
              "i d f");
  }
  bool threw = false;
  try {
    if (n > 0) insertion(x.L, x.L.basis(0), zero_form_of(x.L, x.b.one()));
  } catch (const DegreeError&) {
    threw = true;
  }
  t.require(n == 0 || threw, "degree-0 insertion rejected");
  return t.result();
}

// ---------------------------------------------------------------- complex

CheckResult cedram_antisymmetry(Ctx& x) {
  Tally t("", x.d);
  int n = x.L.rank();
  for (int i = 0; i < x.cfg.draws && n >= 2; ++i) {
    int p = x.pick(2, n);
    std::vector<SForm> ws{x.rsform(p, x.d), d_L(x.L, x.rsform(p - 1, x.d)),
                          wedge(x.rsform(1, x.d), x.rsform(p - 1, x.d))};
    std::vector<Vec> ys;
    for (int k = 0; k < p; ++k) ys.push_back(x.rvec(n, 1));
    std::vector<Vec> sw = ys;
    std::swap(sw[0], sw[1]);
    for (const auto& w : ws) {
      t.compare(w.eval(ys), -w.eval(sw), 0, "swap");
      std::vector<Vec> rep = ys;
      rep[1] = rep[0];
      t.compare(w.eval(rep), x.b.zero(), 0, "repeated argument");
    }
  }
  if (n < 2) t.note("rank < 2");
  return t.result();
}

CheckResult cedram_leibniz(Ctx& x) {
  Tally t("", x.d - x.loss.bracket);
  int n = x.L.rank();
  for (int i = 0; i < x.cfg.draws; ++i) {
    int p = x.pick(0, std::max(n - 1, 0)), q = x.pick(0, std::max(n - 1 - p, 0));
    if (p + q + 1 > n) continue;
    SForm a = x.rsform(p, x.d), c = x.rsform(q, x.d);
    SForm lhs = d_L(x.L, wedge(a, c));
    SForm r1 = wedge(d_L(x.L, a), phi_dagger_apply(x.L, c));
    SForm r2 = wedge(phi_dagger_apply(x.L, a), d_L(x.L, c));
    SForm rhs = p % 2 == 0 ? r1 + r2 : r1 - r2;
    t.compare(lhs, rhs, x.loss.bracket, "degrees " + std::to_string(p) + "," + std::to_string(q));
  }
  return t.result();
}

CheckResult cedram_d_squared(Ctx& x) {
  Tally t("", x.d - x.loss.d_squared);
  int n = x.L.rank();
  int forms = 0;
  for (int p = 0; p + 2 <= n; ++p)
    for (std::size_t ti = 0; ti < tuples(n, p).size(); ++ti)
      for (const auto& f : x.monos()) {
        SForm w(n, p, x.b.zero());
        w.c[ti] = f;
        t.compare(d_squared_residual(x.L, w), SForm(n, p + 2, x.b.zero()), x.loss.d_squared, "degree " + std::to_string(p));
        ++forms;
      }
  t.note(std::to_string(forms) + " basis forms");
  return t.result();
}

CheckResult cedram_phi_commutes(Ctx& x) {
  Tally t("", x.d - x.loss.bracket);
  int n = x.L.rank();
  for (int p = 0; p < n; ++p)
    for (std::size_t ti = 0; ti < tuples(n, p).size(); ++ti)
      for (const auto& f : x.monos()) {
        SForm w(n, p, x.b.zero());
        w.c[ti] = f;
        t.compare(phi_dagger_apply(x.L, d_L(x.L, w)), d_L(x.L, phi_dagger_apply(x.L, w)), x.loss.bracket,
                  "degree " + std::to_string(p));
      }
  return t.result();
}

CheckResult cedram_wedge(Ctx& x) {
  Tally t("", x.d);
  int n = x.L.rank();
  for (int i = 0; i < x.cfg.draws; ++i) {
    int a = x.pick(0, n), c = x.pick(0, n - a), e = x.pick(0, n - a - c);
    MForm A = x.rmform(a, x.d), B = x.rmform(c, x.d), C = x.rmform(e, x.d);
    t.compare(wedge_end(x.E, wedge_end(x.E, A, B), C), wedge_end(x.E, A, wedge_end(x.E, B, C)), 0, "End-valued");
    SForm u = x.rsform(a, x.d), v = x.rsform(c, x.d), w = x.rsform(e, x.d);
    t.compare(wedge(wedge(u, v), w), wedge(u, wedge(v, w)), 0, "scalar");
  }
  return t.result();
}

CheckResult cedram_bracket(Ctx& x) {
  Tally t("", x.d);
  for (int i = 0; i < x.cfg.draws; ++i) {
    Twisted a = x.rend(x.d), c = x.rend(x.d), e = x.rend(x.d);
    t.compare(end_bracket(x.E, a, c), scale(Rational(-1), end_bracket(x.E, c, a)), 0, "skew");
    auto term = [&](const Twisted& p, const Twisted& q, const Twisted& r) {
      return end_bracket(x.E, ad_phiE(x.E, p), end_bracket(x.E, q, r));
    };
    Twisted jac = term(a, c, e) + term(c, e, a) + term(e, a, c);
    t.compare(jac, scale(Rational(0), jac), 0, "Hom-Jacobi with Ad");
    Twisted z = scale(Rational(0), a);
    MForm fa(x.L.rank(), 0, z), fc(x.L.rank(), 0, z);
    fa.c[0] = a;
    fc.c[0] = c;
    t.compare(form_bracket(x.E, x.L, fa, fc).c[0], end_bracket(x.E, a, c), 0, "degree 0 form bracket");
  }
  return t.result();
}

// ---------------------------------------------------------------- connections

CheckResult connection_validate(Ctx& x) {
  std::vector<std::pair<std::string, CheckResult>> parts;
  for (const auto& [name, conn] : x.s.connections) {
    ValidationReport rep = validate_connection(conn, x.loss.connection);
    std::vector<std::pair<std::string, CheckResult>> sub;
    for (const auto& e : rep.entries) sub.emplace_back(e.name, e);
    CheckResult m = merge(sub, x.d);
    if (conn.twist != 1) m.detail = "twist " + std::to_string(conn.twist) + (m.detail.empty() ? "" : "; " + m.detail);
    parts.emplace_back(name, m);
  }
  CheckResult out = merge(parts, x.d - x.loss.connection);
  if (parts.empty()) out.detail = "no connections";
  return out;
}

CheckResult connection_trivial(Ctx& x) {
  Tally t("", x.d - x.loss.bracket);
  Connection c0 = trivial_connection(x.s.E, x.s.L);
  int r = x.E.rank(), n = x.L.rank();
  for (int kk = 0; kk < r; ++kk)
    t.compare(conn_apply(c0, x.E.basis_section(kk)), EForm(n, 1, zero_vec(x.b, r)), 0, "frame is flat");
  for (const auto& f : x.monos())
    for (int kk = 0; kk < r; ++kk) {
      EForm ps(n, 0, zero_vec(x.b, r));
      ps.c[0] = apply(x.b, x.E.phiE(), x.E.basis_section(kk));
      EForm rhs = wedge(d_L(x.L, zero_form_of(x.L, f)), ps);
      t.compare(conn_apply(c0, scale(f, x.E.basis_section(kk))), rhs, x.loss.bracket, "d f (x) phi_E b");
    }
  t.require(validate_connection(c0, x.loss.connection).ok(), "trivial connection validates");
  return t.result();
}

CheckResult connection_covariant(Ctx& x) {
  Tally t("", x.d - x.loss.connection);
  int n = x.L.rank();
  for (const auto& [name, c] : x.valid)
    for (int i = 0; i < x.cfg.draws && n > 0; ++i) {
      Vec xi = x.rvec(n, 1);
      Section s = x.rvec(x.E.rank(), x.d);
      JetPoly f = x.rjet(x.d);
      t.compare(covariant_derivative(c, scale(f, xi), s), scale(x.b.pull(f), covariant_derivative(c, xi, s)), 0,
                name + ": phi*-linear in xi");
      JetPoly lf = lie_derivative(x.L, xi, zero_form_of(x.L, f)).c[0];
      Section rhs = scale(lf, apply(x.b, x.E.phiE(), s)) + scale(x.b.pull(f), covariant_derivative(c, xi, s));
      t.compare(covariant_derivative(c, xi, scale(f, s)), rhs, x.loss.connection, name + ": Leibniz");
    }
  return t.result();
}

CheckResult connection_degree0(Ctx& x) {
  Tally t("", x.d);
  int n = x.L.rank(), r = x.E.rank();
  for (const auto& [name, c] : x.valid)
    for (const auto& s : x.E.monomial_sections()) {
      EForm s0(n, 0, zero_vec(x.b, r));
      s0.c[0] = s;
      EForm ds = d_nabla(c, s0);
      t.compare(ds, conn_apply(c, s), 0, name + ": d s = nabla s");
      for (int j = 0; j < n; ++j)
        t.compare(ds.eval({x.L.basis(j)}), covariant_derivative(c, x.L.phiL_inv_basis(j), s), 0,
                  name + ": direction");
    }
  return t.result();
}

CheckResult connection_laws(Ctx& x) {
  Tally t("", x.d - x.loss.connection);
  int n = x.L.rank(), r = x.E.rank();
  auto reform = [&](int p) {
    EForm w(n, p, zero_vec(x.b, r));
    for (auto& v : w.c) v = x.rvec(r, x.d);
    return w;
  };
  int draws = 0;
  for (const auto& [name, c] : x.valid)
    for (int i = 0; i < x.cfg.draws; ++i) {
      int l = x.pick(0, std::max(n - 1, 0));
      int q = x.pick(0, std::max(n - 1 - l, 0));
      if (l + q + 1 <= n) {
        SForm a = x.rsform(l, x.d);
        EForm beta = reform(q);
        EForm lhs = d_nabla(c, wedge(a, beta));
        EForm r1 = wedge(d_L(x.L, a), phi_twist(x.E, x.L, beta));
        EForm r2 = wedge(phi_dagger_apply(x.L, a), d_nabla(c, beta));
        t.compare(lhs, l % 2 == 0 ? r1 + r2 : r1 - r2, x.loss.connection,
                  name + ": graded Leibniz, degrees " + std::to_string(l) + "," + std::to_string(q));
      }
      int p = x.pick(0, std::max(n - 1, 0));
      if (p + 1 <= n) {
        EForm w = reform(p);
        t.compare(phi_twist(x.E, x.L, d_nabla(c, w)), d_nabla(c, phi_twist(x.E, x.L, w)), x.loss.connection,
                  name + ": commutes with the twist, degree " + std::to_string(p));
      }
      ++draws;
    }
  t.note(std::to_string(draws) + " draws");
  return t.result();
}

CheckResult connection_affine(Ctx& x) {
  Tally t("", x.d - x.loss.connection);
  int n = x.L.rank(), r = x.E.rank();
  std::vector<Connection> pool;
  for (const auto& v : x.valid) pool.push_back(v.second);
  Connection c0 = trivial_connection(x.s.E, x.s.L);
  SpaceSpec s1 = space_spec(x.E, x.L, "End", 1, Subspace::PhiE, x.k);
  for (int i = 0; i < x.cfg.draws; ++i) {
    QVec v(s1.ambient_dim);
    for (const auto& bv : s1.basis) v = axpy(x.rq(), bv, v);
    Connection c = with_alpha(c0, mform_from_coords(x.E, n, 1, x.k, v));
    if (validate_connection(c, x.loss.connection).ok()) pool.push_back(c);
  }
  int pairs = 0;
  for (std::size_t i = 0; i < pool.size(); ++i)
    for (std::size_t j = 0; j < pool.size(); ++j) {
      const Connection &c1 = pool[i], &c2 = pool[j];
      Section s = x.rvec(r, x.d);
      JetPoly f = x.rjet(x.d);
      auto D = [&](const Section& u) { return conn_apply(c1, u) - conn_apply(c2, u); };
      t.compare(D(scale(f, s)), scale(x.b.pull(f), D(s)), 0, "difference is phi*-linear");
      t.compare(phi_twist(x.E, x.L, D(s)), D(apply(x.b, x.E.phiE(), s)), x.loss.connection, "difference commutes");
      Connection sum = with_alpha(c2, alpha_form(c2) + (alpha_form(c1) - alpha_form(c2)));
      t.require(same_connection(sum, c1, 0), "nabla_2 + (nabla_1 - nabla_2) = nabla_1");
      ++pairs;
    }
  t.note(std::to_string(pairs) + " pairs");
  return t.result();
}

std::vector<Twisted> end_samples(Ctx& x) {
  std::vector<Twisted> ts{x.E.phiE()};
  for (const auto& g : x.s.gauges) ts.push_back(g.second);
  for (int i = 0; i < x.cfg.draws; ++i) ts.push_back(x.rend(x.d));
  return ts;
}

CheckResult connection_end(Ctx& x) {
  Tally t("", x.d - x.loss.connection);
  int lc = x.loss.connection;
  auto ts = end_samples(x);
  for (const auto& [name, c] : x.valid) {
    Connection c0 = trivial_connection(c.E, c.L);
    t.compare(end_connection_apply(c, x.E.phiE()), end_connection_apply(c0, scale(Rational(0), x.E.phiE())), 0,
              name + ": phi_E is parallel");
    for (const auto& T : ts) {
      MForm DT = end_connection_apply(c, T);
      for (const auto& s : x.E.monomial_sections()) {
        EForm direct = end_connection_eval(c, T, s);
        EForm via = map_form(DT, [&](const Twisted& m) { return apply(x.b, m, s); });
        t.compare(via, direct, lc, name + ": tensorial " + sec_label(s));
      }
      t.compare(DT, end_connection_apply(c0, T) + ad_alpha(c, T), lc, name + ": End_0 + ad(alpha)");
      JetPoly f = x.rjet(x.d);
      SForm df = d_L(x.L, zero_form_of(x.L, f));
      MForm adT(x.L.rank(), 0, scale(Rational(0), ad_phiE(x.E, T)));
      adT.c[0] = ad_phiE(x.E, T);
      MForm rhs = wedge(df, adT) + scale(x.b.pull(f), DT);
      t.compare(end_connection_apply(c, scale(f, T)), rhs, lc, name + ": Leibniz");
    }
  }
  if (x.valid.empty()) t.note("no valid connections");
  return t.result();
}

MForm compose_right(const Base& b, const MForm& w, const Twisted& m) {
  return map_form(w, [&](const Twisted& v) { return compose(b, v, m); });
}

MForm compose_left(const Base& b, const Twisted& m, const MForm& w) {
  return map_form(w, [&](const Twisted& v) { return compose(b, m, v); });
}

CheckResult connection_end_product(Ctx& x) {
  int lc = std::max(x.loss.connection, x.d - x.k);
  Tally t("", x.d - lc);
  std::vector<Twisted> ts;
  for (const auto& v : end_phiE_basis(x.E, x.k)) ts.push_back(twisted_from_coords(x.E, x.k, v));
  for (const auto& g : x.s.gauges) ts.push_back(g.second);
  Twisted pi = x.E.phiE_inv();
  for (const auto& [name, c] : x.valid)
    for (const auto& T1 : ts)
      for (const auto& T2 : ts) {
        MForm lhs = end_connection_apply(c, gauge_mul(x.E, T1, T2));
        MForm rhs = compose_right(x.b, end_connection_apply(c, T1), compose(x.b, pi, T2)) +
                    compose_left(x.b, compose(x.b, T1, pi), end_connection_apply(c, T2));
        t.compare(lhs, rhs, lc, name);
      }
  if (x.valid.empty()) t.note("no valid connections");
  return t.result();
}

// ---------------------------------------------------------------- gauge

CheckResult gauge_group(Ctx& x) {
  Tally t("", x.d);
  auto gs = x.gauges(x.cfg.draws);
  for (const auto& g : x.s.gauges) t.require(is_gauge_element(x.E, g.second, 0), g.first + " is a gauge element");
  Twisted id = x.E.phiE();
  for (const auto& [n1, a] : gs) {
    t.compare(gauge_mul(x.E, id, a), a, 0, "left identity");
    t.compare(gauge_mul(x.E, a, id), a, 0, "right identity");
    for (const auto& [n2, c] : gs) {
      Twisted p = gauge_mul(x.E, a, c);
      t.require(is_gauge_element(x.E, p, 0), "closed: " + n1 + "," + n2);
      for (std::size_t i = 0; i < std::min<std::size_t>(gs.size(), 3); ++i) {
        const Twisted& e = gs[i].second;
        t.compare(gauge_mul(x.E, p, e), gauge_mul(x.E, a, gauge_mul(x.E, c, e)), 0, "associative");
      }
    }
  }
  t.note(std::to_string(gs.size()) + " elements");
  return t.result();
}

CheckResult gauge_inverse(Ctx& x) {
  Tally t("", x.d);
  auto gs = x.gauges(x.cfg.draws);
  int k = x.d;
  for (const auto& [name, a] : gs) {
    Twisted inv = gauge_inv(x.E, a);
    t.compare(gauge_mul(x.E, inv, a), x.E.phiE(), 0, name + ": left inverse");
    t.compare(gauge_mul(x.E, a, inv), x.E.phiE(), 0, name + ": right inverse");
    t.compare(gauge_inv(x.E, inv), a, 0, name + ": involution");
    t.require(is_gauge_element(x.E, inv, 0), name + ": inverse is a gauge element");
    // X -> a (.) X is injective on coefficient space, so the inverse is unique.
    std::size_t dim = twisted_dim(x.E, k);
    std::vector<QVec> cols;
    for (std::size_t j = 0; j < dim; ++j) {
      QVec e(dim);
      e[j] = 1;
      cols.push_back(twisted_coords(gauge_mul(x.E, a, twisted_from_coords(x.E, k, e)), k));
    }
    t.require(dim == 0 || rank(QMatrix::from_columns(static_cast<int>(dim), cols)) == static_cast<int>(dim),
              name + ": unique");
  }
  return t.result();
}

CheckResult gauge_well_defined(Ctx& x) {
  Tally t("", x.d - x.loss.connection);
  auto gs = x.gauges(2);
  for (const auto& [cn, c] : x.valid)
    for (const auto& [gn, g] : gs) {
      Connection h = gauge_act(g, c);
      t.require(h.twist == 1, cn + " by " + gn + ": twist");
      t.require(validate_connection(h, x.loss.connection).ok(), cn + " by " + gn + ": connection");
    }
  return t.result();
}

CheckResult gauge_action_law(Ctx& x) {
  Tally t("", x.d - x.loss.connection);
  auto gs = x.gauges(2);
  int lc = x.loss.connection;
  int left_fail = 0, pairs = 0;
  for (const auto& [cn, c] : x.valid) {
    t.require(same_connection(gauge_act(x.E.phiE(), c), c, lc), cn + ": identity acts trivially");
    for (const auto& [n1, g1] : gs)
      for (const auto& [n2, g2] : gs) {
        Connection both = gauge_act(gauge_mul(x.E, g1, g2), c);
        t.require(same_connection(both, gauge_act(g2, gauge_act(g1, c)), lc), cn + ": " + n1 + "," + n2);
        if (!same_connection(both, gauge_act(g1, gauge_act(g2, c)), lc)) ++left_fail;
        ++pairs;
      }
  }
  t.note("right action: (psi1 psi2) acts as psi1 then psi2; the left order differs on " + std::to_string(left_fail) +
         " of " + std::to_string(pairs) + " pairs");
  return t.result();
}

CheckResult gauge_closed_form(Ctx& x) {
  Tally t("", x.d - x.loss.connection);
  auto gs = x.gauges(2);
  int lc = x.loss.connection;
  for (const auto& [cn, c] : x.valid)
    for (const auto& [gn, g] : gs) {
      Connection h = gauge_act(g, c);
      t.compare(alpha_form(h), gauge_alpha_closed_form(g, c), lc, cn + " by " + gn + ": closed form");
      for (const auto& s : x.E.monomial_sections())
        t.compare(conn_apply(h, s), gauge_act_eval(c, g, s), lc, cn + " by " + gn + ": " + sec_label(s));
    }
  return t.result();
}

CheckResult gauge_alpha_in_end(Ctx& x) {
  Tally t("", x.d - x.loss.connection);
  auto gs = x.gauges(2);
  int lc = x.loss.connection;
  for (const auto& [cn, c] : x.valid)
    for (const auto& [gn, g] : gs) {
      MForm a = alpha_form(gauge_act(g, c));
      t.compare(phi_twist(x.E, x.L, a), compose_right(x.b, a, x.E.phiE()), lc, cn + " by " + gn);
    }
  return t.result();
}

CheckResult gauge_isotropy(Ctx& x) {
  Tally t("", x.d - x.loss.connection);
  auto gs = x.gauges(1);
  int lc = x.loss.connection;
  for (const auto& [cn, c] : x.valid) {
    std::vector<Twisted> fixers{x.E.phiE(), scale(Rational(2), x.E.phiE())};
    IsotropySearch iso = brute_force_isotropy(c, 4, lc);
    for (std::size_t i = 0; i < iso.fixers.size() && i < 6; ++i) fixers.push_back(iso.fixers[i]);
    for (const auto& psi : fixers) {
      t.require(same_connection(gauge_act(psi, c), c, lc), cn + ": fixer");
      for (const auto& [gn, g] : gs) {
        Twisted conj = gauge_mul(x.E, gauge_inv(x.E, g), gauge_mul(x.E, psi, g));
        Connection moved = gauge_act(g, c);
        t.require(same_connection(gauge_act(conj, moved), moved, lc), cn + ": conjugated by " + gn);
      }
    }
  }
  return t.result();
}

CheckResult gauge_scalars(Ctx& x) {
  Tally t("", x.d - x.loss.connection);
  const char* cs[] = {"2", "-1", "1/3"};
  for (const auto& [cn, c] : x.valid)
    for (const char* q : cs)
      t.require(same_connection(gauge_act(scale(parse_rational(q), x.E.phiE()), c), c, x.loss.connection),
                cn + ": " + q + " phi_E");
  return t.result();
}

CheckResult gauge_kernel(Ctx& x) {
  Tally t("", x.k);
  std::string dims;
  for (const auto& [cn, c] : x.valid) {
    EndKernel ker = end_kernel(c, x.loss.connection);
    QVec id = twisted_coords(x.E.phiE(), ker.order);
    bool in = subspace_coords(ker.phiE_coords, id).has_value();
    t.require(in, cn + ": phi_E in kernel");
    dims += (dims.empty() ? "" : ", ") + cn + " " + std::to_string(ker.phiE_basis.size()) +
            (ker.phiE_basis.size() == 1 ? " (irreducible)" : " (reducible)");
  }
  if (!dims.empty()) t.note("kernel dims: " + dims);
  return t.result();
}

CheckResult gauge_lemma(Ctx& x) {
  Tally t("", x.k);
  auto gs = x.gauges(1);
  int lc = x.loss.connection;
  for (const auto& [cn, c] : x.valid) {
    bool irr = is_irreducible(c, lc);
    IsotropySearch iso = brute_force_isotropy(c, 4, lc);
    if (iso.feasible)
      t.require(iso.scalars_only == irr, cn + ": isotropy is scalars iff irreducible");
    else
      t.note(cn + ": isotropy search skipped (pool " + std::to_string(iso.pool_dim) + ")");
    std::size_t dim = end_kernel(c, lc).phiE_basis.size();
    for (const auto& [gn, g] : gs)
      t.require(end_kernel(gauge_act(g, c), lc).phiE_basis.size() == dim, cn + ": kernel dim invariant under " + gn);
  }
  return t.result();
}

CheckResult gauge_orbit(Ctx& x) {
  Tally t("", x.d - x.loss.connection);
  auto gs = x.gauges(1);
  int lc = x.loss.connection, found = 0, total = 0;
  for (const auto& [cn, c] : x.valid)
    for (const auto& [gn, g] : gs) {
      Connection target = gauge_act(g, c);
      auto psi = find_gauge_transform(c, target, lc);
      ++total;
      if (!psi) {
        t.require(false, cn + " to " + cn + "^" + gn + ": no transform found");
        continue;
      }
      ++found;
      t.require(is_gauge_element(x.E, *psi, x.d - x.k), cn + " by " + gn + ": solution is a gauge element");
      t.require(same_connection(gauge_act(*psi, c), target, lc), cn + " by " + gn + ": re-acting");
    }
  t.note(std::to_string(found) + " of " + std::to_string(total) + " orbit pairs recovered");
  return t.result();
}

// ---------------------------------------------------------------- slice

CheckResult slice_metric(Ctx& x) {
  Tally t("", x.d);
  for (const auto& [name, h] : x.s.metrics) {
    t.require(metric_well_formed(h), name + ": symmetric positive");
    t.require(validate_hom_metric(x.E, h), name + ": compatible with phi_E");
  }
  if (x.s.metrics.empty()) t.note("no metrics");
  return t.result();
}

CheckResult slice_ad_alpha(Ctx& x) {
  Tally t("", x.k);
  int lc = x.loss.connection;
  for (const auto& [cn, c] : x.valid) {
    Connection c0 = trivial_connection(c.E, c.L);
    LinOperator D = operator_matrix("d_nabla", c, 0, x.cfg.subspace, lc);
    LinOperator D0 = operator_matrix("d_nabla", c0, 0, x.cfg.subspace, lc);
    LinOperator A = operator_matrix("ad_alpha", c, 0, x.cfg.subspace, lc);
    t.require(D.M == D0.M + A.M, cn + ": D = D_0 + ad(alpha)");
    for (const auto& T : end_samples(x))
      for (const auto& f : x.monos())
        t.compare(ad_alpha(c, scale(f, T)), scale(x.b.pull(f), ad_alpha(c, T)), 0, cn + ": order 0");
  }
  return t.result();
}

CheckResult slice_adjoint(Ctx& x) {
  Tally t("", x.k);
  int lc = x.loss.connection;
  for (const auto& [cn, c] : x.valid) {
    LinOperator D = operator_matrix("d_nabla", c, 0, x.cfg.subspace, lc);
    LinOperator Ds = adjoint(D);
    for (int i = 0; i < x.cfg.draws && D.dom.dim() > 0; ++i) {
      QVec a(D.dom.dim()), bb(D.cod.dim());
      for (auto& v : a) v = x.rq();
      for (auto& v : bb) v = x.rq();
      QVec amb(D.dom.ambient_dim);
      for (std::size_t j = 0; j < a.size(); ++j) amb = axpy(a[j], D.dom.basis[j], amb);
      MForm img = end_connection_apply(c, twisted_from_coords(x.E, D.dom.order, amb));
      auto y = subspace_coords(D.cod.basis, mform_coords(img, D.cod.order));
      t.require(y.has_value() && *y == D.M * a, cn + ": matrix represents the operator");
      if (y) t.require(dot(*y, bb) == dot(a, Ds.M * bb), cn + ": <D a, b> = <a, D* b>");
    }
  }
  t.note("subspace " + to_string(x.cfg.subspace));
  return t.result();
}

CheckResult slice_laplacian(Ctx& x) {
  Tally t("", x.k);
  int lc = x.loss.connection;
  for (const auto& [cn, c] : x.valid) {
    LinOperator D = operator_matrix("d_nabla", c, 0, x.cfg.subspace, lc);
    LinOperator lap = laplacian(c, x.cfg.subspace, lc);
    t.require(lap.M == lap.M.transpose(), cn + ": symmetric");
    int n0 = static_cast<int>(D.dom.dim());
    t.require(n0 == 0 || same_span(n0, nullspace(lap.M), nullspace(D.M)), cn + ": ker Delta = ker D");
    for (int i = 0; i < x.cfg.draws && n0 > 0; ++i) {
      QVec a(n0);
      for (auto& v : a) v = x.rq();
      QVec da = D.M * a;
      t.require(dot(a, lap.M * a) == dot(da, da), cn + ": <Delta a, a> = |D a|^2");
    }
    t.note(cn + ": index " + std::to_string(n0 - rank(lap.M)) + " = dim ker");
  }
  return t.result();
}

CheckResult slice_decomposition(Ctx& x) {
  Tally t("", x.k);
  int lc = x.loss.connection;
  for (const auto& [cn, c] : x.valid) {
    LinOperator D = operator_matrix("d_nabla", c, 0, x.cfg.subspace, lc);
    if (D.cod.dim() == 0) continue;
    std::vector<QVec> ker = nullspace(D.M);
    for (int i = 0; i < x.cfg.draws; ++i) {
      QVec a(D.cod.dim());
      for (auto& v : a) v = x.rq();
      Decomposition dec = coulomb_decompose_coords(c, a, x.cfg.subspace, lc);
      QVec db = D.dom.dim() ? D.M * dec.beta : QVec(a.size());
      QVec sum = db;
      for (std::size_t j = 0; j < sum.size(); ++j) sum[j] += dec.gamma[j];
      t.require(sum == a, cn + ": alpha = D beta + gamma");
      t.require(D.dom.dim() == 0 || is_zero(D.M.transpose() * dec.gamma), cn + ": D* gamma = 0");
      t.require(dot(db, dec.gamma) == 0, cn + ": orthogonal");
      for (const auto& kv : ker) t.require(dot(kv, dec.beta) == 0, cn + ": beta orthogonal to ker Delta");
    }
    if (D.dom.dim() > 0) {
      QVec b0(D.dom.dim());
      for (auto& v : b0) v = x.rq();
      Decomposition exact = coulomb_decompose_coords(c, D.M * b0, x.cfg.subspace, lc);
      t.require(is_zero(exact.gamma), cn + ": exact forms have no harmonic part");
    }
  }
  return t.result();
}

CheckResult slice_tangent(Ctx& x) {
  Tally t("", x.k);
  int lc = x.loss.connection;
  for (const auto& [cn, c] : x.valid) {
    LinOperator D = operator_matrix("d_nabla", c, 0, Subspace::PhiE, lc);
    t.require(D.closed, cn + ": image lies in End_phiE 1-forms");
    int sd = slice_dimension(c, lc);
    int kerT = static_cast<int>(nullspace(D.M.transpose()).size());
    t.require(sd == kerT, cn + ": slice = ker D*");
    t.note(cn + ": T = im D (+) ker D*, dims " + std::to_string(rank(D.M)) + " + " + std::to_string(sd) + " = " +
           std::to_string(D.cod.dim()));
  }
  return t.result();
}

CheckResult slice_gau0(Ctx& x) {
  Tally t("", x.k);
  int lc = x.loss.connection;
  for (const auto& [cn, c] : x.valid) {
    LinOperator D = operator_matrix("d_nabla", c, 0, Subspace::PhiE, lc);
    auto G = gau0_basis(c, lc);
    auto id = subspace_coords(D.dom.basis, twisted_coords(x.E.phiE(), D.dom.order));
    t.require(id.has_value(), cn + ": phi_E in End_phiE");
    if (!id) continue;
    for (const auto& g : G) t.require(dot(g, *id) == 0, cn + ": gau0 orthogonal to phi_E");
    t.require(G.size() + 1 == D.dom.dim(), cn + ": codimension 1");
    int n0 = static_cast<int>(D.dom.dim());
    int kerD = static_cast<int>(nullspace(D.M).size());
    int kerG = 0;
    if (!G.empty()) {
      QMatrix DG = D.M * QMatrix::from_columns(n0, G);
      kerG = static_cast<int>(nullspace(DG).size());
    }
    t.require(kerG == kerD - 1, cn + ": dim ker D on gau0 = dim ker D - 1");
  }
  return t.result();
}

CheckResult slice_local(Ctx& x) {
  Tally t("", x.k);
  int lc = x.loss.connection;
  for (const auto& [cn, c] : x.valid) {
    SliceCheck sc = local_slice_check(c, lc);
    bool irr = is_irreducible(c, lc);
    if (irr)
      t.require(sc.bijective(), cn + ": irreducible, differential bijective");
    else
      t.require(!sc.injective, cn + ": reducible, differential not injective");
    t.note(cn + ": " + std::to_string(sc.domain_dim) + " -> " + std::to_string(sc.target_dim) + ", rank " +
           std::to_string(sc.rank));
  }
  return t.result();
}

using CheckFn = std::function<CheckResult(Ctx&)>;

const std::map<std::string, CheckFn>& check_functions() {
  static const std::map<std::string, CheckFn> fns = {
      {"field.exact", field_exact},
      {"jet.ring_axioms", jet_ring_axioms},
      {"jet.pullback_morphism", jet_pullback},
      {"jet.invertibility", jet_invertibility},
      {"jet.twisted_derivation", jet_twisted_derivation},
      {"cedram.d0", cedram_d0},
      {"bundle.structure", bundle_structure},
      {"bundle.invertible", bundle_invertible},
      {"bundle.twisted_linearity", bundle_linearity},
      {"bundle.ad_roundtrip", bundle_ad},
      {"bundle.end_phiE_stability", bundle_stability},
      {"bundle.phi_dagger", bundle_phi_dagger},
      {"algebroid.bracket", [](Ctx& x) { return algebroid_part(x, {"skew", "phiL_morphism", "hom_jacobi"}); }},
      {"algebroid.leibniz", [](Ctx& x) { return algebroid_part(x, {"leibniz"}); }},
      {"algebroid.representation", [](Ctx& x) { return algebroid_part(x, {"representation_twist"}); }},
      {"algebroid.hom_lie_rep", [](Ctx& x) { return algebroid_part(x, {"representation_bracket"}); }},
      {"algebroid.anchor", algebroid_anchor},
      {"algebroid.lie_derivative", algebroid_lie},
      {"algebroid.insertion", algebroid_insertion},
      {"cedram.antisymmetry", cedram_antisymmetry},
      {"cedram.leibniz", cedram_leibniz},
      {"cedram.d_squared", cedram_d_squared},
      {"cedram.phi_dagger_commutes", cedram_phi_commutes},
      {"cedram.wedge_assoc", cedram_wedge},
      {"cedram.bracket_jacobi", cedram_bracket},
      {"connection.validate", connection_validate},
      {"connection.trivial", connection_trivial},
      {"connection.covariant", connection_covariant},
      {"connection.d_nabla_degree0", connection_degree0},
      {"connection.laws", connection_laws},
      {"connection.affine", connection_affine},
      {"connection.end_connection", connection_end},
      {"connection.end_product", connection_end_product},
      {"gauge.group", gauge_group},
      {"gauge.inverse", gauge_inverse},
      {"gauge.well_defined", gauge_well_defined},
      {"gauge.action_law", gauge_action_law},
      {"gauge.closed_form", gauge_closed_form},
      {"gauge.alpha_in_end", gauge_alpha_in_end},
      {"gauge.isotropy_conjugation", gauge_isotropy},
      {"gauge.scalars", gauge_scalars},
      {"gauge.kernel_contains_phiE", gauge_kernel},
      {"gauge.lemma", gauge_lemma},
      {"gauge.orbit", gauge_orbit},
      {"slice.metric", slice_metric},
      {"slice.ad_alpha", slice_ad_alpha},
      {"slice.adjoint", slice_adjoint},
      {"slice.laplacian", slice_laplacian},
      {"slice.decomposition", slice_decomposition},
      {"slice.tangent", slice_tangent},
      {"slice.gau0", slice_gau0},
      {"slice.local_slice", slice_local},
  };
  return fns;
}

unsigned name_seed(const std::string& name) {
  unsigned h = 2166136261u;
  for (unsigned char ch : name) h = (h ^ ch) * 16777619u;
  return h;
}

bool selected(const Config& cfg, const std::string& name) {
  if (cfg.only.empty()) return true;
  for (const auto& p : cfg.only)
    if (name.rfind(p, 0) == 0) return true;
  return false;
}

}  // namespace

Report run_checks(const Scenario& s, const Config& cfg) {
  Ctx x(s, cfg);
  Report r;
  r.scenario = s.id;
  r.order = s.base->order();
  const auto& fns = check_functions();
  for (const auto& [name, anchor] : anchor_table()) {
    if (!selected(cfg, name)) continue;
    // Each check draws from its own stream so that filtering does not change results.
    x.rng.seed(cfg.seed ^ name_seed(name));
    auto t0 = std::chrono::steady_clock::now();
    CheckResult c;
    try {
      c = fns.at(name)(x);
    } catch (const std::exception& e) {
      c.pass = false;
      c.residual = "error";
      c.detail = e.what();
    }
    auto t1 = std::chrono::steady_clock::now();
    c.name = name;
    c.anchor = anchor;
    c.time_ms = cfg.timing ? std::chrono::duration<double, std::milli>(t1 - t0).count() : 0.0;
    if (name.rfind("gauge.", 0) == 0 || name.rfind("slice.", 0) == 0 || name.rfind("connection.", 0) == 0) {
      if (!x.skipped.empty() && name != "connection.validate") {
        std::string sk;
        for (const auto& n : x.skipped) sk += (sk.empty() ? "" : ",") + n;
        c.detail = c.detail.empty() ? "skipped invalid: " + sk : c.detail + "; skipped invalid: " + sk;
      }
    }
    r.checks.entries.push_back(c);
  }
  return r;
}

}  // namespace homalg
