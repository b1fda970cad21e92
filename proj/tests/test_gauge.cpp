#include "doctest.h"
#include "fixtures.hpp"
#include "homalg/gauge.hpp"

using namespace homalg;

namespace {

Twisted tw(const fx::World& w, std::vector<std::vector<std::string>> rows) { return Twisted{fx::qmat(w.base, rows), 1}; }

}  // namespace

TEST_CASE("rank-1 products collapse to symbol products") {
  auto w = fx::s1();
  Twisted p = gauge_mul(*w.E, tw(w, {{"1+x"}}), tw(w, {{"2-x^2"}}));
  CHECK(p.twist == 1);
  CHECK(p.M(0, 0) == fx::P(w.base, "2+2*x-x^2-x^3"));
  CHECK(budget_eq(gauge_mul(*w.E, tw(w, {{"1+x"}}), w.E->phiE()), tw(w, {{"1+x"}}), 0));
}

TEST_CASE("constant matrices multiply as matrices when Phi_E = I") {
  auto w = fx::s1(2);
  Twisted p = gauge_mul(*w.E, tw(w, {{"1", "2"}, {"0", "1"}}), tw(w, {{"3", "0"}, {"1", "1"}}));
  CHECK(budget_eq(p, tw(w, {{"5", "2"}, {"1", "1"}}), 0));
}

TEST_CASE("gauge inverse") {
  auto w = fx::s1();
  Twisted inv = gauge_inv(*w.E, tw(w, {{"1+x"}}));
  CHECK(inv.twist == 1);
  CHECK(inv.M(0, 0) == fx::P(w.base, "1-x+x^2-x^3"));
  CHECK(budget_eq(gauge_mul(*w.E, tw(w, {{"1+x"}}), inv), w.E->phiE(), 0));
  CHECK(budget_eq(gauge_inv(*w.E, w.E->phiE()), w.E->phiE(), 0));
  Twisted psi = tw(w, {{"3+x-x^3"}});
  CHECK(budget_eq(gauge_inv(*w.E, gauge_inv(*w.E, psi)), psi, 0));
}

TEST_CASE("identity acts trivially and constant gauges conjugate") {
  auto w = fx::s1(2);
  Connection c = fx::with_A(w, {fx::qmat(w.base, {{"0", "1"}, {"0", "0"}})});
  CHECK(same_connection(gauge_act(w.E->phiE(), c), c, 0));
  Connection g = gauge_act(tw(w, {{"1", "0"}, {"0", "2"}}), c);
  CHECK(budget_eq(g.A[0], fx::qmat(w.base, {{"0", "2"}, {"0", "0"}}), 1));
}

TEST_CASE("S1 rank 1: every gauge element fixes every connection") {
  auto w = fx::s1();
  Connection c = fx::with_A(w, {fx::qmat(w.base, {{"1/2"}})});
  for (const char* a : {"2", "-3", "1/5"}) CHECK(same_connection(gauge_act(tw(w, {{a}}), c), c, 1));
}

TEST_CASE("definition and closed form agree") {
  auto w = fx::s1(2);
  Connection c = fx::with_A(w, {fx::qmat(w.base, {{"1", "2"}, {"0", "-1"}})});
  Twisted psi = tw(w, {{"2", "1"}, {"1", "1"}});
  Connection g = gauge_act(psi, c);
  CHECK(budget_eq(alpha_form(g), gauge_alpha_closed_form(psi, c), 1));
  auto s = fx::s4();
  Connection cs = fx::with_A(s, {fx::qmat(s.base, {{"0", "1"}, {"0", "0"}}), fx::qmat(s.base, {{"0", "0"}, {"1", "0"}}),
                                 fx::qmat(s.base, {{"0", "0"}, {"0", "0"}})});
  Twisted rot = tw(s, {{"0", "1"}, {"-1", "0"}});
  CHECK(budget_eq(alpha_form(gauge_act(rot, cs)), gauge_alpha_closed_form(rot, cs), 1));
}

TEST_CASE("the action composes on the right") {
  auto s = fx::s4();
  Connection c = fx::with_A(s, {fx::qmat(s.base, {{"0", "1"}, {"0", "0"}}), fx::qmat(s.base, {{"0", "0"}, {"1", "0"}}),
                                fx::qmat(s.base, {{"1", "0"}, {"0", "0"}})});
  Twisted p1 = tw(s, {{"0", "1"}, {"-1", "0"}}), p2 = tw(s, {{"1", "1"}, {"0", "1"}});
  Connection prod = gauge_act(gauge_mul(*s.E, p1, p2), c);
  CHECK(same_connection(prod, gauge_act(p2, gauge_act(p1, c)), 1));
  CHECK(!same_connection(prod, gauge_act(p1, gauge_act(p2, c)), 1));
}

TEST_CASE("End kernels") {
  auto w1 = fx::s1();
  EndKernel k1 = end_kernel(w1.trivial());
  CHECK(k1.basis.size() == 1);
  CHECK(is_irreducible(w1.trivial()));
  auto w3 = fx::s1(2);
  EndKernel k3 = end_kernel(w3.trivial());
  CHECK(k3.basis.size() >= 2);
  CHECK(!is_irreducible(w3.trivial()));
  auto w2 = fx::s2();
  CHECK(end_kernel(w2.trivial()).basis.size() == 1);
  CHECK(is_irreducible(w2.trivial()));
  auto s = fx::s4();
  Connection irr = fx::with_A(s, {fx::qmat(s.base, {{"0", "1"}, {"0", "0"}}), fx::qmat(s.base, {{"0", "0"}, {"1", "0"}}),
                                  fx::qmat(s.base, {{"0", "0"}, {"0", "0"}})});
  CHECK(is_irreducible(irr));
  CHECK(end_kernel(irr).phiE_basis.size() == 1);
}

TEST_CASE("brute-force isotropy agrees with the kernel criterion") {
  auto w3 = fx::s1(2);
  IsotropySearch r = brute_force_isotropy(w3.trivial());
  CHECK(r.feasible);
  CHECK(!r.scalars_only);
  auto w1 = fx::s1();
  IsotropySearch r1 = brute_force_isotropy(w1.trivial());
  CHECK(r1.feasible);
  CHECK(r1.scalars_only);
  CHECK(!r1.fixers.empty());
}

TEST_CASE("orbit solver roundtrip and kernel-dimension obstruction") {
  auto w = fx::s1(2);
  Connection c = fx::with_A(w, {fx::qmat(w.base, {{"1", "2"}, {"0", "-1"}})});
  Twisted psi = tw(w, {{"2", "1"}, {"1", "1"}});
  Connection g = gauge_act(psi, c);
  auto found = find_gauge_transform(c, g);
  REQUIRE(found.has_value());
  CHECK(same_connection(gauge_act(*found, c), g, 1));
  Connection upper = fx::with_A(w, {fx::qmat(w.base, {{"0", "1"}, {"0", "0"}})});
  CHECK(end_kernel(upper).basis.size() != end_kernel(w.trivial()).basis.size());
  CHECK(!find_gauge_transform(w.trivial(), upper).has_value());
}
