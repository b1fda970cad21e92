// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "homalg/scenario.hpp"
#include "json.hpp"

using namespace homalg;

namespace {

std::string corpus(const std::string& f) { return std::string(HOMALG_CORPUS) + "/" + f; }

struct Outcome {
  bool pass = true;
  std::string note;
  void require(bool c, const std::string& what) {
    if (!c && pass) note = what;
    pass = pass && c;
  }
};

std::mt19937 rng(424242u);
int pick(int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<unsigned>(hi - lo + 1)); }
Rational rq() { return Rational(pick(-3, 3), pick(1, 2)); }

// ------------------------------------------------------------------ classical oracle
// Polynomials as exponent -> coefficient maps, truncated at total degree d; plain textbook
// Lie algebroid formulas with no twisting anywhere.

using OPoly = std::map<std::vector<int>, mpq_class>;

struct Oracle {
  int m, d, n, r;
  std::vector<std::vector<OPoly>> rho;               // rho[i][j]: coefficient of d/dx_i in a(e_j)
  std::vector<std::vector<std::vector<OPoly>>> c;    // c[k][i][j]

  static void add(OPoly& a, const std::vector<int>& e, const mpq_class& v) {
    mpq_class& slot = a[e];
    slot += v;
    if (slot == 0) a.erase(e);
  }
  OPoly plus(const OPoly& a, const OPoly& b) const {
    OPoly out = a;
    for (const auto& [e, v] : b) add(out, e, v);
    return out;
  }
  OPoly times(const OPoly& a, const OPoly& b) const {
    OPoly out;
    for (const auto& [ea, va] : a)
      for (const auto& [eb, vb] : b) {
        std::vector<int> e(m);
        int deg = 0;
        for (int i = 0; i < m; ++i) deg += (e[i] = ea[i] + eb[i]);
        if (deg <= d) add(out, e, va * vb);
      }
    return out;
  }
  OPoly scaled(const OPoly& a, const mpq_class& s) const {
    OPoly out;
    for (const auto& [e, v] : a) add(out, e, v * s);
    return out;
  }
  OPoly partial(int i, const OPoly& a) const {
    OPoly out;
    for (const auto& [e, v] : a)
      if (e[i] > 0) {
        std::vector<int> f = e;
        f[i] -= 1;
        add(out, f, v * e[i]);
      }
    return out;
  }
  OPoly act(int j, const OPoly& f) const {
    OPoly out;
    for (int i = 0; i < m; ++i) out = plus(out, times(rho[i][j], partial(i, f)));
    return out;
  }
  OPoly act_vec(const std::vector<OPoly>& xi, const OPoly& f) const {
    OPoly out;
    for (int j = 0; j < n; ++j) out = plus(out, times(xi[j], act(j, f)));
    return out;
  }
  std::vector<OPoly> bracket(const std::vector<OPoly>& x, const std::vector<OPoly>& y) const {
    std::vector<OPoly> out(n);
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out[k] = plus(out[k], times(times(x[i], y[j]), c[k][i][j]));
      out[k] = plus(out[k], act_vec(x, y[k]));
      out[k] = plus(out[k], scaled(act_vec(y, x[k]), -1));
    }
    return out;
  }

  // Forms: value on sorted index tuples, each value a vector of `width` polynomials.
  using OForm = std::map<std::vector<int>, std::vector<OPoly>>;

  static int sort_sign(std::vector<int>& idx) {
    int s = 1;
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j + 1 < idx.size() - i; ++j)
        if (idx[j] > idx[j + 1]) {
          std::swap(idx[j], idx[j + 1]);
          s = -s;
        } else if (idx[j] == idx[j + 1]) {
          return 0;
        }
    for (std::size_t i = 0; i + 1 < idx.size(); ++i)
      if (idx[i] == idx[i + 1]) return 0;
    return s;
  }

  std::vector<OPoly> value(const OForm& w, std::vector<int> idx, int width) const {
    int s = sort_sign(idx);
    std::vector<OPoly> out(width);
    if (s == 0) return out;
    auto it = w.find(idx);
    if (it == w.end()) return out;
    for (int t = 0; t < width; ++t) out[t] = scaled(it->second[t], s);
    return out;
  }

  // Classical differential; A empty means the scalar case (width 1, no connection term).
  OForm differential(const OForm& w, int p, int width, const std::vector<std::vector<std::vector<OPoly>>>& A) const {
    OForm out;
    std::vector<int> I;
    std::function<void(int)> rec = [&](int start) {
      if (static_cast<int>(I.size()) == p + 1) {
        std::vector<OPoly> v(width);
        for (int k = 0; k <= p; ++k) {
          std::vector<int> rest;
          for (int l = 0; l <= p; ++l)
            if (l != k) rest.push_back(I[l]);
          std::vector<OPoly> inner = value(w, rest, width);
          mpq_class sg = k % 2 == 0 ? 1 : -1;
          for (int t = 0; t < width; ++t) {
            OPoly term = act(I[k], inner[t]);
            if (!A.empty())
              for (int u = 0; u < width; ++u) term = plus(term, times(A[I[k]][t][u], inner[u]));
            v[t] = plus(v[t], scaled(term, sg));
          }
        }
        for (int k = 0; k <= p; ++k)
          for (int l = k + 1; l <= p; ++l)
            for (int q = 0; q < n; ++q) {
              std::vector<int> args{q};
              for (int s = 0; s <= p; ++s)
                if (s != k && s != l) args.push_back(I[s]);
              std::vector<OPoly> inner = value(w, args, width);
              mpq_class sg = (k + l) % 2 == 0 ? 1 : -1;
              for (int t = 0; t < width; ++t) v[t] = plus(v[t], scaled(times(c[q][I[k]][I[l]], inner[t]), sg));
            }
        out[I] = v;
        return;
      }
      for (int i = start; i < n; ++i) {
        I.push_back(i);
        rec(i + 1);
        I.pop_back();
      }
    };
    rec(0);
    return out;
  }

  // Classical gauge action A_j -> g^{-1} (a(e_j) g + A_j g) for r <= 2.
  std::vector<std::vector<OPoly>> inverse(const std::vector<std::vector<OPoly>>& g) const {
    auto series_inv = [&](const OPoly& f) {
      mpq_class c0 = f.count(std::vector<int>(m, 0)) ? f.at(std::vector<int>(m, 0)) : mpq_class(0);
      OPoly u = scaled(f, 1 / c0);
      OPoly rest = plus(u, OPoly{{std::vector<int>(m, 0), mpq_class(-1)}});
      OPoly acc{{std::vector<int>(m, 0), mpq_class(1)}}, pw = acc;
      for (int k = 1; k <= d; ++k) {
        pw = scaled(times(pw, rest), -1);
        acc = plus(acc, pw);
      }
      return scaled(acc, 1 / c0);
    };
    if (r == 1) return {{series_inv(g[0][0])}};
    OPoly det = plus(times(g[0][0], g[1][1]), scaled(times(g[0][1], g[1][0]), -1));
    OPoly di = series_inv(det);
    return {{times(di, g[1][1]), scaled(times(di, g[0][1]), -1)},
            {scaled(times(di, g[1][0]), -1), times(di, g[0][0])}};
  }
  std::vector<std::vector<OPoly>> mat_mul(const std::vector<std::vector<OPoly>>& a,
                                          const std::vector<std::vector<OPoly>>& b) const {
    std::vector<std::vector<OPoly>> out(r, std::vector<OPoly>(r));
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j)
        for (int k = 0; k < r; ++k) out[i][j] = plus(out[i][j], times(a[i][k], b[k][j]));
    return out;
  }
};

OPoly to_o(const JetPoly& f, int upto) {
  OPoly out;
  for (const auto& [e, v] : f.terms())
    if (total_degree(e) <= upto) out[e] = v;
  return out;
}

OPoly clip(const OPoly& a, int upto) {
  OPoly out;
  for (const auto& [e, v] : a) {
    int deg = 0;
    for (int x : e) deg += x;
    if (deg <= upto) out[e] = v;
  }
  return out;
}

Oracle oracle_of(const Scenario& s) {
  Oracle o;
  o.m = s.base->vars();
  o.d = s.base->order();
  o.n = s.L->rank();
  o.r = s.E->rank();
  o.rho.assign(o.m, std::vector<OPoly>(o.n));
  for (int i = 0; i < o.m; ++i)
    for (int j = 0; j < o.n; ++j) o.rho[i][j] = to_o(s.L->anchor_matrix()(i, j), o.d);
  o.c.assign(o.n, std::vector<std::vector<OPoly>>(o.n, std::vector<OPoly>(o.n)));
  for (int k = 0; k < o.n; ++k)
    for (int i = 0; i < o.n; ++i)
      for (int j = 0; j < o.n; ++j) o.c[k][i][j] = to_o(s.L->c(k, i, j), o.d);
  return o;
}

bool same(const JetPoly& lib, const OPoly& ora) {
  int v = lib.valid();
  return v >= lib.order() - 1 && to_o(lib, v) == clip(ora, v);
}

Scenario classical_line() {
  return parse_scenario(R"({
    "base": {"vars": 1, "order": 3, "phi": ["x0"]},
    "bundle": {"rank": 2, "phiE": [["1","0"],["0","1"]]},
    "algebroid": {"rank": 1, "phiL": [["1"]], "anchor": [["x0"]]},
    "connections": {"a": [[["x0","1"],["0","2*x0^2"]]]},
    "gauges": {"g": [["1+x0","x0"],["0","1"]]}
  })");
}

Outcome criterion1() {
  Outcome out;
  int compared = 0;
  std::vector<Scenario> fixtures{load_scenario(corpus("s2.json")), load_scenario(corpus("s4.json")), classical_line()};
  for (const auto& s : fixtures) {
    Oracle o = oracle_of(s);
    const Base& b = *s.base;
    const HomAlgebroid& L = *s.L;
    int n = L.rank(), r = s.E->rank();
    std::vector<JetPoly> monos;
    for (const auto& e : b.basis()) monos.push_back(JetPoly::monomial(b.vars(), b.order(), e));
    // bracket on the full coefficient basis
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (const auto& f : monos)
          for (const auto& g : monos) {
            Vec x = scale(f, L.basis(i)), y = scale(g, L.basis(j));
            Vec lib = bracket(L, x, y);
            std::vector<OPoly> ox(n), oy(n);
            for (int t = 0; t < n; ++t) {
              ox[t] = to_o(x[t], b.order());
              oy[t] = to_o(y[t], b.order());
            }
            auto ora = o.bracket(ox, oy);
            for (int t = 0; t < n; ++t) out.require(same(lib[t], ora[t]), s.id + " bracket");
            ++compared;
          }
    // d_L on every basis form of every degree
    for (int p = 0; p < n; ++p)
      for (std::size_t ti = 0; ti < tuples(n, p).size(); ++ti)
        for (const auto& f : monos) {
          SForm w(n, p, b.zero());
          w.c[ti] = f;
          SForm lib = d_L(L, w);
          Oracle::OForm ow{{tuples(n, p)[ti], {to_o(f, b.order())}}};
          auto ora = o.differential(ow, p, 1, {});
          for (std::size_t tj = 0; tj < lib.c.size(); ++tj)
            out.require(same(lib.c[tj], ora[tuples(n, p + 1)[tj]][0]), s.id + " d_L");
          ++compared;
        }
    // d^nabla and the gauge action for every connection and gauge
    for (const auto& [cn, c] : s.connections) {
      std::vector<std::vector<std::vector<OPoly>>> A(n, std::vector<std::vector<OPoly>>(r, std::vector<OPoly>(r)));
      for (int j = 0; j < n; ++j)
        for (int u = 0; u < r; ++u)
          for (int v = 0; v < r; ++v) A[j][u][v] = to_o(c.A[j](u, v), b.order());
      for (int p = 0; p < n; ++p)
        for (std::size_t ti = 0; ti < tuples(n, p).size(); ++ti)
          for (int comp = 0; comp < r; ++comp)
            for (const auto& f : monos) {
              EForm w(n, p, zero_vec(b, r));
              w.c[ti][comp] = f;
              EForm lib = d_nabla(c, w);
              std::vector<OPoly> val(r);
              val[comp] = to_o(f, b.order());
              auto ora = o.differential({{tuples(n, p)[ti], val}}, p, r, A);
              for (std::size_t tj = 0; tj < lib.c.size(); ++tj)
                for (int u = 0; u < r; ++u)
                  out.require(same(lib.c[tj][u], ora[tuples(n, p + 1)[tj]][u]), s.id + " d_nabla " + cn);
              ++compared;
            }
      for (const auto& [gn, g] : s.gauges) {
        Connection h = gauge_act(g, c);
        std::vector<std::vector<OPoly>> G(r, std::vector<OPoly>(r));
        for (int u = 0; u < r; ++u)
          for (int v = 0; v < r; ++v) G[u][v] = to_o(g.M(u, v), b.order());
        auto Gi = o.inverse(G);
        for (int j = 0; j < n; ++j) {
          std::vector<std::vector<OPoly>> dG(r, std::vector<OPoly>(r));
          for (int u = 0; u < r; ++u)
            for (int v = 0; v < r; ++v) dG[u][v] = o.act(j, G[u][v]);
          auto Aj = o.mat_mul(Gi, dG);
          auto conj = o.mat_mul(Gi, o.mat_mul(A[j], G));
          for (int u = 0; u < r; ++u)
            for (int v = 0; v < r; ++v)
              out.require(same(h.A[j](u, v), o.plus(Aj[u][v], conj[u][v])), s.id + " gauge " + cn + " by " + gn);
          ++compared;
        }
      }
    }
  }
  out.note = (out.pass ? "" : out.note + "; ") + std::to_string(compared) + " basis comparisons";
  return out;
}

// ------------------------------------------------------------------ d^2

std::shared_ptr<const HomAlgebroid> conjugated_so3(const std::shared_ptr<const Base>& b) {
  QMatrix P(3, 3);
  do {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) P(i, j) = pick(-2, 2);
  } while (det(P) == 0);
  QMatrix Pi = inverse(P);
  auto eps = [](int i, int j, int k) { return (i - j) * (j - k) * (k - i) / 2; };
  Structure c(3, std::vector<std::vector<JetPoly>>(3, std::vector<JetPoly>(3, b->zero())));
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        Rational v = 0;
        for (int a = 0; a < 3; ++a)
          for (int bb = 0; bb < 3; ++bb)
            for (int q = 0; q < 3; ++q) v += Pi(k, q) * eps(a, bb, q) * P(a, i) * P(bb, j);
        c[k][i][j] = b->constant(v);
      }
  return std::make_shared<const HomAlgebroid>(b, PolyMatrix::identity(3, 0, b->order()), PolyMatrix(0, 3, 0, b->order()), c);
}

bool d_squared_zero(const HomAlgebroid& L, std::string* residual = nullptr) {
  const Base& b = L.base();
  int n = L.rank();
  for (int p = 0; p + 2 <= n; ++p)
    for (std::size_t ti = 0; ti < tuples(n, p).size(); ++ti)
      for (const auto& e : b.basis()) {
        SForm w(n, p, b.zero());
        w.c[ti] = JetPoly::monomial(b.vars(), b.order(), e);
        SForm dd = d_squared_residual(L, w);
        for (const auto& f : dd.c) {
          JetPoly z = budget_residual(f, b.zero(), 2);
          if (!z.is_zero()) {
            if (residual) *residual = to_string(z);
            return false;
          }
        }
      }
  return true;
}

Outcome criterion2() {
  Outcome out;
  out.require(d_squared_zero(*load_scenario(corpus("s1.json")).L), "S1");
  Scenario s2 = load_scenario(corpus("s2.json"));
  out.require(d_squared_zero(*s2.L), "S2");
  for (int t = 0; t < 20; ++t) {
    auto L = conjugated_so3(s2.base);
    out.require(validate_algebroid(*L).ok(), "conjugated structure is valid");
    out.require(d_squared_zero(*L), "conjugation " + std::to_string(t));
  }
  std::string res;
  bool neg = d_squared_zero(*load_scenario(corpus("negative/so3_corrupt.json")).L, &res);
  out.require(!neg && !res.empty(), "corrupt fixture must leave a residual");
  out.note = (out.pass ? "" : out.note + "; ") + "S1, S2, 20 conjugations zero; corrupt residual " + res;
  return out;
}

// ------------------------------------------------------------------ report-driven criteria

const std::vector<std::string> kPositive = {"s1.json", "s2.json", "s3.json", "s4.json", "s5.json"};

Outcome from_checks(const std::vector<std::string>& names, int draws) {
  Outcome out;
  for (const auto& f : kPositive) {
    Config cfg;
    cfg.only = names;
    cfg.draws = draws;
    cfg.timing = false;
    Report r = run_checks(load_scenario(corpus(f)), cfg);
    for (const auto& e : r.checks.entries) out.require(e.pass, f + " " + e.name + ": " + e.detail);
  }
  return out;
}

Outcome criterion3() {
  Outcome out = from_checks({"connection.laws"}, 100);
  out.note = (out.pass ? "" : out.note + "; ") + "100 draws per connection per fixture";
  return out;
}

Connection random_valid(const Connection& c0, int loss) {
  const HomBundle& E = *c0.E;
  int k = working_order(E.base(), loss);
  SpaceSpec s1 = space_spec(E, *c0.L, "End", 1, Subspace::PhiE, k);
  for (;;) {
    QVec v(s1.ambient_dim);
    for (const auto& bv : s1.basis) v = axpy(rq(), bv, v);
    Connection c = with_alpha(c0, mform_from_coords(E, c0.L->rank(), 1, k, v));
    if (validate_connection(c, loss).ok()) return c;
  }
}

Outcome criterion4() {
  Outcome out;
  int pairs = 0;
  for (const auto& f : kPositive) {
    Scenario s = load_scenario(corpus(f));
    Connection c0 = trivial_connection(s.E, s.L);
    const Base& b = *s.base;
    for (int t = 0; t < 50; ++t) {
      Connection c1 = random_valid(c0, 1), c2 = random_valid(c0, 1);
      for (const auto& e : b.basis()) {
        JetPoly f0 = JetPoly::monomial(b.vars(), b.order(), e);
        for (const auto& sec : s.E->monomial_sections()) {
          auto D = [&](const Section& u) { return conn_apply(c1, u) - conn_apply(c2, u); };
          out.require(budget_eq(D(scale(f0, sec)), scale(b.pull(f0), D(sec)), 0), f + " phi*-linear");
          out.require(budget_eq(phi_twist(*s.E, *s.L, D(sec)), D(apply(b, s.E->phiE(), sec)), 0),
                      f + " commutes with phi_E");
        }
      }
      ++pairs;
    }
  }
  out.note = (out.pass ? "" : out.note + "; ") + std::to_string(pairs) + " random pairs";
  return out;
}

Twisted random_gauge(const HomBundle& E) {
  int d = E.base().order();
  auto basis = end_phiE_basis(E, d);
  for (;;) {
    QVec v(twisted_dim(E, d));
    for (const auto& bv : basis) v = axpy(Rational(pick(-1, 1)), bv, v);
    Twisted t = twisted_from_coords(E, d, v);
    if (is_gauge_element(E, t, 0)) return t;
  }
}

Outcome criterion5() {
  Outcome out;
  int draws = 0, left_differs = 0, iso = 0;
  for (const auto& f : kPositive) {
    Scenario s = load_scenario(corpus(f));
    const HomBundle& E = *s.E;
    Connection c0 = trivial_connection(s.E, s.L);
    for (int t = 0; t < 50; ++t) {
      Connection c = random_valid(c0, 1);
      Twisted p1 = random_gauge(E), p2 = random_gauge(E);
      out.require(same_connection(gauge_act(E.phiE(), c), c, 1), f + " identity");
      Connection both = gauge_act(gauge_mul(E, p1, p2), c);
      out.require(same_connection(both, gauge_act(p2, gauge_act(p1, c)), 1), f + " compatibility");
      if (!same_connection(both, gauge_act(p1, gauge_act(p2, c)), 1)) ++left_differs;
      out.require(validate_connection(gauge_act(p1, c), 1).ok(), f + " well defined");
      out.require(budget_eq(alpha_form(gauge_act(p1, c)), gauge_alpha_closed_form(p1, c), 1), f + " closed form");
      ++draws;
    }
    for (const auto& [cn, c] : s.connections) {
      if (c.twist != 1 || !validate_connection(c, 1).ok()) continue;
      EndKernel ker = end_kernel(c, 1);
      for (const auto& T : ker.phiE_basis)
        for (int sc = 0; sc <= 3; ++sc) {
          Twisted psi = T + scale(Rational(sc), E.phiE());
          if (!is_gauge_element(E, psi, E.base().order() - ker.order)) continue;
          out.require(same_connection(gauge_act(psi, c), c, 1), f + " kernel element fixes " + cn);
          Twisted g = random_gauge(E);
          Twisted conj = gauge_mul(E, gauge_inv(E, g), gauge_mul(E, psi, g));
          Connection moved = gauge_act(g, c);
          out.require(same_connection(gauge_act(conj, moved), moved, 1), f + " conjugation " + cn);
          ++iso;
        }
    }
  }
  out.note = (out.pass ? "" : out.note + "; ") + std::to_string(draws) + " draws, " + std::to_string(iso) +
             " isotropy elements; composition acts as a right action, the literal left order differs on " +
             std::to_string(left_differs) + " draws";
  return out;
}

Outcome criterion6() {
  Outcome out;
  Scenario s1 = load_scenario(corpus("s1.json"));
  Connection n1 = s1.connection("nabla0");
  out.require(is_irreducible(n1) && end_kernel(n1).phiE_basis.size() == 1 && end_kernel(n1).basis.size() == 1,
              "S1 nabla0 irreducible with kernel 1");
  Scenario s3 = load_scenario(corpus("s3.json"));
  Connection n3 = s3.connection("nabla0");
  out.require(end_kernel(n3).phiE_basis.size() >= 2 && !is_irreducible(n3), "S3 block diagonal reducible");
  int compared = 0;
  for (const auto& f : kPositive) {
    Scenario s = load_scenario(corpus(f));
    for (const auto& [cn, c] : s.connections) {
      if (c.twist != 1 || !validate_connection(c, 1).ok()) continue;
      IsotropySearch iso = brute_force_isotropy(c, 4, 1);
      if (!iso.feasible) continue;
      out.require(iso.scalars_only == is_irreducible(c), f + " " + cn + " brute force disagrees");
      ++compared;
    }
  }
  out.note = (out.pass ? "" : out.note + "; ") + std::to_string(compared) + " brute-force comparisons";
  return out;
}

Outcome criterion7() {
  Outcome out;
  int n = 0;
  for (const auto& f : kPositive) {
    Scenario s = load_scenario(corpus(f));
    for (const auto& [cn, c] : s.connections) {
      if (c.twist != 1 || !validate_connection(c, 1).ok()) continue;
      LinOperator D = operator_matrix("d_nabla", c, 0, Subspace::PhiE, 1);
      LinOperator lap = laplacian(c, Subspace::PhiE, 1);
      int n0 = static_cast<int>(D.dom.dim());
      out.require(n0 == 0 || same_span(n0, nullspace(lap.M), nullspace(D.M)), f + " ker Delta = ker D");
      for (int t = 0; t < 100; ++t) {
        QVec a(D.cod.dim());
        for (auto& v : a) v = rq();
        Decomposition dec = coulomb_decompose_coords(c, a, Subspace::PhiE, 1);
        QVec db = n0 ? D.M * dec.beta : QVec(a.size());
        QVec res = a;
        for (std::size_t i = 0; i < a.size(); ++i) res[i] -= db[i] + dec.gamma[i];
        out.require(is_zero(res), f + " residual");
        out.require(dot(db, dec.gamma) == 0, f + " orthogonality");
        ++n;
      }
    }
  }
  out.note = (out.pass ? "" : out.note + "; ") + std::to_string(n) + " decompositions";
  return out;
}

Outcome criterion8() {
  Outcome out;
  int trials = 0;
  for (const char* f : {"s1.json", "s3.json", "s4.json", "s5.json"}) {
    Scenario s = load_scenario(corpus(f));
    Connection c0 = trivial_connection(s.E, s.L);
    for (int t = 0; t < 50; ++t) {
      Connection c = random_valid(c0, 1);
      Twisted psi = random_gauge(*s.E);
      Connection target = gauge_act(psi, c);
      auto found = find_gauge_transform(c, target, 1);
      out.require(found && same_connection(gauge_act(*found, c), target, 1), std::string(f) + " roundtrip");
      ++trials;
    }
  }
  Scenario s3 = load_scenario(corpus("s3.json")), s4 = load_scenario(corpus("s4.json"));
  out.require(!find_gauge_transform(s3.connection("nabla0"), s3.connection("upper")), "S3 nabla0 vs upper");
  out.require(!find_gauge_transform(s4.connection("nabla0"), s4.connection("irred")), "S4 nabla0 vs irred");
  out.note = (out.pass ? "" : out.note + "; ") + std::to_string(trials) + " roundtrips, 2 distinguished pairs";
  return out;
}

Outcome criterion9() {
  Outcome out;
  int irr = 0, red = 0;
  for (const auto& f : kPositive) {
    Scenario s = load_scenario(corpus(f));
    for (const auto& [cn, c] : s.connections) {
      if (c.twist != 1 || !validate_connection(c, 1).ok()) continue;
      SliceCheck sc = local_slice_check(c, 1);
      if (is_irreducible(c)) {
        out.require(sc.bijective(), f + " " + cn + " should be bijective");
        ++irr;
      } else {
        out.require(!sc.injective, f + " " + cn + " should not be injective");
        ++red;
      }
    }
  }
  out.require(irr > 0 && red > 0, "corpus has both kinds");
  out.note = (out.pass ? "" : out.note + "; ") + std::to_string(irr) + " irreducible, " + std::to_string(red) +
             " reducible";
  return out;
}

std::string read_file(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream b;
  b << in.rdbuf();
  return b.str();
}

Outcome criterion10() {
  Outcome out;
  std::set<std::string> expected;
  for (const auto& [n, a] : anchor_table()) expected.insert(a);
  for (const auto& f : kPositive) {
    std::string base = std::string(HOMALG_WORK) + "/acc_" + f;
    for (const char* tag : {"_1", "_2"}) {
      std::string cmd = std::string("\"") + HOMALG_CLI + "\" report \"" + corpus(f) + "\" --json \"" + base + tag +
                        "\" --no-timing 2>/dev/null";
      out.require(std::system(cmd.c_str()) == 0, f + " report exit status");
    }
    std::string a = read_file(base + "_1"), b = read_file(base + "_2");
    out.require(!a.empty() && a == b, f + " byte-deterministic");
    auto j = nlohmann::json::parse(a);
    std::map<std::string, int> seen;
    for (const auto& c : j["checks"]) seen[c["anchor"].get<std::string>()]++;
    for (const auto& e : expected) out.require(seen[e] == 1, f + " anchor count for " + e);
    out.require(seen.size() == expected.size(), f + " unexpected anchors");
  }
  out.note = (out.pass ? "" : out.note + "; ") + std::to_string(expected.size()) + " anchors, 5 scenarios";
  return out;
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, Outcome (*)()>> all = {
      {"C1 classical reduction", criterion1},   {"C2 d^2 = 0", criterion2},
      {"C3 d_nabla laws", criterion3},          {"C4 affine space", criterion4},
      {"C5 gauge action suite", criterion5},    {"C6 irreducibility", criterion6},
      {"C7 decomposition", criterion7},         {"C8 orbit solver", criterion8},
      {"C9 local slice", criterion9},           {"C10 CLI report", criterion10},
  };
  bool ok = true;
  for (const auto& [name, fn] : all) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.note = std::string("exception: ") + e.what();
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %s (%.2fs) %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), s, o.note.c_str());
    ok = ok && o.pass;
  }
  return ok ? 0 : 1;
}
