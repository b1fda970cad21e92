#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "homalg/scenario.hpp"

using namespace homalg;

namespace {

std::string corpus(const std::string& name) { return std::string(HOMALG_CORPUS) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream b;
  b << in.rdbuf();
  return b.str();
}

std::string kind_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ScenarioError& e) {
    return e.kind() + "@" + e.path();
  }
  return "ok";
}

const char* kS1 = R"({
  "base": {"vars": 1, "order": 3, "phi": ["2*x0"]},
  "bundle": {"rank": 1, "phiE": [["1"]]},
  "algebroid": {"rank": 1, "phiL": [["1"]], "anchor": [["x0"]]}
})";

std::string with(const std::string& from, const std::string& to) {
  std::string s = kS1;
  auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

const CheckResult& entry(const Report& r, const std::string& name) {
  const CheckResult* c = r.checks.find(name);
  REQUIRE(c != nullptr);
  return *c;
}

}  // namespace

TEST_CASE("minimal S1 text parses to the expected shapes") {
  Scenario s = parse_scenario(kS1);
  CHECK(s.base->vars() == 1);
  CHECK(s.base->order() == 3);
  CHECK(s.L->rank() == 1);
  CHECK(s.E->rank() == 1);
  CHECK(s.connections.empty());
}

TEST_CASE("input errors carry kind and field path") {
  CHECK(kind_of(with("\"2*x0\"", "\"2*x5\"")) == "unknown_variable@base.phi[0]");
  CHECK(kind_of(with("\"phiE\": [[\"1\"]]", "\"phiE\": [[\"x0\"]]")) == "not_invertible@bundle.phiE");
  CHECK(kind_of(with("\"phiL\": [[\"1\"]]", "\"phiL\": [[\"0\"]]")) == "not_invertible@algebroid.phiL");
  CHECK(kind_of(with("\"2*x0\"", "\"x0^2\"")) == "not_invertible@base.phi");
  CHECK(kind_of(with("\"2*x0\"", "\"1+2*x0\"")) == "phi_constant_term@base.phi[0]");
  CHECK(kind_of(with("\"anchor\": [[\"x0\"]]", "\"anchor\": [[\"x0\", \"1\"]]")) == "schema@algebroid.anchor[0]");
  CHECK(kind_of(with("\"order\": 3", "\"order\": \"3\"")) == "schema@base.order");
  CHECK(kind_of(with("\"2*x0\"", "\"2*x0 +\"")) == "parse@base.phi[0]");
  CHECK(kind_of(R"({"base": {"vars": 1}})") == "schema@base.order");
}

TEST_CASE("syntax errors report the line") {
  std::string text = "{\n  \"base\": {\n    \"vars\": 1,,\n  }\n}\n";
  try {
    parse_scenario(text);
    FAIL("expected a syntax error");
  } catch (const ScenarioError& e) {
    CHECK(e.kind() == "syntax");
    CHECK(e.line() == 3);
  }
}

TEST_CASE("structure keys are validated and completed by skew symmetry") {
  std::string t = R"({
    "base": {"vars": 0, "order": 1, "phi": []},
    "bundle": {"rank": 0, "phiE": []},
    "algebroid": {"rank": 2, "phiL": [["1","0"],["0","1"]], "anchor": [], "c": {"c[1][0][1]": "3"}}
  })";
  Scenario s = parse_scenario(t);
  CHECK(to_string(s.L->c(1, 1, 0)) == "-3");
  std::string bad = t;
  bad.replace(bad.find("c[1][0][1]"), 10, "c[2][0][1]");
  CHECK(kind_of(bad) == "schema@algebroid.c.c[2][0][1]");
  bad = t;
  bad.replace(bad.find("c[1][0][1]"), 10, "c[1][0]");
  CHECK(kind_of(bad).rfind("schema@", 0) == 0);
}

TEST_CASE("non-invertible gauge is an input error") {
  std::string t = kS1;
  t.insert(t.rfind('}'), R"(, "gauges": {"bad": [["x0"]]})");
  CHECK(kind_of(t) == "not_invertible@gauges.bad");
}

TEST_CASE("corpus roundtrips through emit exactly") {
  for (const auto& f : std::filesystem::recursive_directory_iterator(HOMALG_CORPUS)) {
    if (f.path().extension() != ".json") continue;
    CAPTURE(f.path().string());
    Scenario s = load_scenario(f.path().string());
    std::string once = emit_scenario(s);
    Scenario back = parse_scenario(once);
    CHECK(emit_scenario(back) == once);
    REQUIRE(back.connections.size() == s.connections.size());
    for (std::size_t i = 0; i < s.connections.size(); ++i) {
      CHECK(back.connections[i].first == s.connections[i].first);
      CHECK(back.connections[i].second.twist == s.connections[i].second.twist);
      for (std::size_t j = 0; j < s.connections[i].second.A.size(); ++j)
        CHECK(back.connections[i].second.A[j] == s.connections[i].second.A[j]);
    }
    CHECK(back.E->phiE_matrix() == s.E->phiE_matrix());
    CHECK(back.L->anchor_matrix() == s.L->anchor_matrix());
    CHECK(back.L->structure() == s.L->structure());
  }
}

TEST_CASE("anchor table covers every check once") {
  const auto& t = anchor_table();
  std::set<std::string> names, anchors;
  for (const auto& [n, a] : t) {
    names.insert(n);
    anchors.insert(a);
    CHECK(!a.empty());
  }
  CHECK(names.size() == t.size());
  CHECK(anchors.size() == t.size());
  Scenario s = load_scenario(corpus("s1.json"));
  Report r = run_checks(s);
  REQUIRE(r.checks.entries.size() == t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    CHECK(r.checks.entries[i].name == t[i].first);
    CHECK(r.checks.entries[i].anchor == t[i].second);
  }
}

TEST_CASE("positive corpus passes every check") {
  for (const char* f : {"s1.json", "s2.json", "s3.json", "s4.json", "s5.json"}) {
    CAPTURE(f);
    Report r = run_checks(load_scenario(corpus(f)));
    for (const auto& e : r.checks.entries) {
      CAPTURE(e.name);
      CAPTURE(e.detail);
      CHECK(e.pass);
    }
  }
}

TEST_CASE("negative fixtures fail the intended checks") {
  Report so3 = run_checks(load_scenario(corpus("negative/so3_corrupt.json")));
  CHECK(!entry(so3, "algebroid.bracket").pass);
  CHECK(!entry(so3, "cedram.d_squared").pass);
  CHECK(entry(so3, "cedram.d_squared").residual != "0");

  Report unt = run_checks(load_scenario(corpus("negative/s1_untwisted.json")));
  CHECK(!entry(unt, "connection.validate").pass);
  CHECK(entry(unt, "connection.validate").detail.find("connection_leibniz FAILED") != std::string::npos);
  CHECK(entry(unt, "algebroid.bracket").pass);

  Report ca = run_checks(load_scenario(corpus("negative/s1_const_anchor.json")));
  const CheckResult& rep = entry(ca, "algebroid.representation");
  CHECK(!rep.pass);
  CHECK(rep.residual != "0");
  CHECK(entry(ca, "algebroid.leibniz").pass);

  Report bm = run_checks(load_scenario(corpus("negative/s1_bad_metric.json")));
  CHECK(!entry(bm, "slice.metric").pass);
  int failures = 0;
  for (const auto& e : bm.checks.entries) failures += e.pass ? 0 : 1;
  CHECK(failures == 1);
}

TEST_CASE("empty scenario passes vacuously") {
  Scenario s = parse_scenario(R"({"base":{"vars":0,"order":0,"phi":[]},"bundle":{"rank":0,"phiE":[]},
                                   "algebroid":{"rank":0,"phiL":[],"anchor":[]}})");
  Report r = run_checks(s);
  CHECK(r.ok());
  CHECK(r.checks.entries.size() == anchor_table().size());
}

TEST_CASE("reports are deterministic and filters do not change results") {
  Scenario s = load_scenario(corpus("s3.json"));
  Config cfg;
  cfg.timing = false;
  std::string a = report_json(run_checks(s, cfg), false);
  std::string b = report_json(run_checks(s, cfg), false);
  CHECK(a == b);
  CHECK(a.find("time_ms") == std::string::npos);
  Config only = cfg;
  only.only = {"gauge.orbit", "connection.laws"};
  Report part = run_checks(s, only);
  REQUIRE(part.checks.entries.size() == 2);
  Report full = run_checks(s, cfg);
  for (const auto& e : part.checks.entries) {
    const CheckResult& f = entry(full, e.name);
    CHECK(f.detail == e.detail);
    CHECK(f.pass == e.pass);
  }
}

TEST_CASE("loss override and subspace flags reach the checks") {
  Scenario s = load_scenario(corpus("s1.json"));
  Config cfg;
  cfg.only = {"cedram.d_squared"};
  cfg.loss_override = 0;
  Report tight = run_checks(s, cfg);
  cfg.loss_override = 2;
  Report loose = run_checks(s, cfg);
  CHECK(tight.checks.entries[0].order > loose.checks.entries[0].order);
  CHECK(loose.checks.entries[0].order == 1);
  Config full;
  full.subspace = Subspace::Full;
  full.only = {"slice."};
  CHECK(run_checks(load_scenario(corpus("s4.json")), full).ok());
}
