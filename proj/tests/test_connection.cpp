#include "doctest.h"
#include "fixtures.hpp"

using namespace homalg;

TEST_CASE("trivial connection on S1") {
  auto w = fx::s1();
  Connection c = w.trivial();
  CHECK(conn_apply(c, w.E->basis_section(0)).c[0][0].is_zero());
  Section xb{fx::P(w.base, "x")};
  CHECK(conn_apply(c, xb).c[0][0] == fx::P(w.base, "x"));
  CHECK(covariant_derivative(c, w.L->basis(0), xb)[0] == fx::P(w.base, "x"));
  CHECK(covariant_derivative(c, scale(fx::P(w.base, "x"), w.L->basis(0)), xb)[0] == fx::P(w.base, "2*x^2"));
  CHECK(validate_connection(c).ok());
}

TEST_CASE("S1 with constant symbol 1") {
  auto w = fx::s1();
  Connection c = w.trivial();
  c.A[0] = fx::qmat(w.base, {{"1"}});
  CHECK(conn_apply(c, w.E->basis_section(0)).c[0][0] == fx::P(w.base, "1"));
  CHECK(conn_apply(c, Section{fx::P(w.base, "x")}).c[0][0] == fx::P(w.base, "3*x"));
  CHECK(validate_connection(c).ok());
}

TEST_CASE("untwisted alpha breaks the Leibniz condition") {
  auto w = fx::s1();
  Connection c = w.trivial();
  c.A[0] = fx::qmat(w.base, {{"x"}});
  c.twist = 0;
  auto rep = validate_connection(c);
  CHECK(!rep.find("connection_leibniz")->pass);
  CHECK(rep.find("connection_leibniz")->residual != "0");
  CHECK(!rep.find("difference_linear")->pass);
}

TEST_CASE("S2 trivial connection vanishes and d_nabla is the CE differential") {
  auto w = fx::s2();
  Connection c = w.trivial();
  CHECK(conn_apply(c, w.E->basis_section(0)).c[0][0].is_zero());
  EForm om(3, 1, zero_vec(*w.base, 1));
  om[{0}] = Vec{w.base->one()};
  EForm dom = d_nabla(c, om);
  CHECK(dom[{1, 2}][0] == w.base->constant(-1));
  CHECK(dom[{0, 1}][0].is_zero());
  CHECK(dom[{0, 2}][0].is_zero());
}

TEST_CASE("degree-0 d_nabla equals the connection") {
  auto w = fx::s1(2);
  Connection c = w.trivial();
  c.A[0] = fx::qmat(w.base, {{"0", "1"}, {"0", "0"}});
  for (const auto& s : w.E->monomial_sections()) {
    EForm s0(1, 0, zero_vec(*w.base, 2));
    s0.c[0] = s;
    CHECK(budget_eq(d_nabla(c, s0), conn_apply(c, s), 0));
  }
}

TEST_CASE("End connection examples") {
  auto w = fx::s1();
  Connection c = w.trivial();
  MForm z = end_connection_apply(c, w.E->phiE());
  CHECK(z.c[0].M.is_zero());
  // Hand expansion for phi(x) = 2x, anchor x, Phi_E = 1: (nabla^End (a phi*))(h b) = x a'(2x) h(2x) b.
  MForm t = end_connection_apply(c, Twisted{fx::qmat(w.base, {{"x"}}), 1});
  CHECK(budget_eq(t.c[0].M(0, 0), fx::P(w.base, "x"), 1));
  Twisted sq{fx::qmat(w.base, {{"x^2"}}), 1};
  CHECK(budget_eq(end_connection_apply(c, sq).c[0].M(0, 0), fx::P(w.base, "4*x^2"), 1));
  for (const auto& s : w.E->monomial_sections())
    CHECK(budget_eq(end_connection_eval(c, sq, s).c[0], Vec{fx::P(w.base, "4*x^2") * w.base->pull(s[0])}, 1));
}

TEST_CASE("End connection splits as trivial part plus ad(alpha)") {
  auto w = fx::s1(2);
  Connection c = w.trivial();
  c.A[0] = fx::qmat(w.base, {{"1", "2"}, {"0", "-1"}});
  Connection c0 = w.trivial();
  Twisted T{fx::qmat(w.base, {{"1+x", "x^2"}, {"3", "x"}}), 1};
  CHECK(budget_eq(end_connection_apply(c, T), end_connection_apply(c0, T) + ad_alpha(c, T), 1));
}
