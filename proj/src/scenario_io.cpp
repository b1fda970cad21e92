#include <fstream>
#include <sstream>

#include "homalg/scenario.hpp"
#include "json.hpp"

namespace homalg {

using json = nlohmann::ordered_json;

std::string ScenarioError::format(const std::string& kind, const std::string& path, const std::string& msg, int line) {
  std::string out = kind;
  if (line > 0) out += " at line " + std::to_string(line);
  if (!path.empty()) out += " in " + path;
  return out + ": " + msg;
}

const Connection& Scenario::connection(const std::string& name) const {
  for (const auto& [n, c] : connections)
    if (n == name) return c;
  throw ScenarioError("unknown_name", "connections." + name, "no such connection");
}

const Twisted& Scenario::gauge(const std::string& name) const {
  for (const auto& [n, g] : gauges)
    if (n == name) return g;
  throw ScenarioError("unknown_name", "gauges." + name, "no such gauge");
}

namespace {

struct Reader {
  int m = 0;
  int d = 0;

  const json& field(const json& j, const std::string& key, const std::string& path) const {
    if (!j.is_object()) throw ScenarioError("schema", path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw ScenarioError("schema", path + "." + key, "missing field");
    return *it;
  }

  int integer(const json& j, const std::string& path, int lo = 0) const {
    if (!j.is_number_integer()) throw ScenarioError("schema", path, "expected an integer");
    int v = j.get<int>();
    if (v < lo) throw ScenarioError("schema", path, "must be >= " + std::to_string(lo));
    return v;
  }

  JetPoly poly(const json& j, const std::string& path) const {
    std::string text;
    if (j.is_string())
      text = j.get<std::string>();
    else if (j.is_number_integer())
      text = std::to_string(j.get<long long>());
    else
      throw ScenarioError("schema", path, "expected a polynomial string");
    try {
      return parse_poly(text, m, d);
    } catch (const UnknownVariable& e) {
      throw ScenarioError("unknown_variable", path, e.what());
    } catch (const ParseError& e) {
      throw ScenarioError("parse", path, e.what());
    }
  }

  PolyMatrix matrix(const json& j, int rows, int cols, const std::string& path) const {
    if (!j.is_array() || static_cast<int>(j.size()) != rows)
      throw ScenarioError("schema", path, "expected " + std::to_string(rows) + " rows");
    PolyMatrix M(rows, cols, m, d);
    for (int i = 0; i < rows; ++i) {
      const json& row = j[i];
      std::string rp = path + "[" + std::to_string(i) + "]";
      if (!row.is_array() || static_cast<int>(row.size()) != cols)
        throw ScenarioError("schema", rp, "expected " + std::to_string(cols) + " entries");
      for (int k = 0; k < cols; ++k) M(i, k) = poly(row[k], rp + "[" + std::to_string(k) + "]");
    }
    return M;
  }
};

int line_of(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

void require_invertible(const PolyMatrix& M, const std::string& path) {
  if (!M.is_invertible()) throw ScenarioError("not_invertible", path, "constant part is singular");
}

// "c[k][i][j]" with 0-based indices.
std::array<int, 3> structure_key(const std::string& key, int n, const std::string& path) {
  std::array<int, 3> idx{};
  std::size_t pos = 0;
  if (key.empty() || key[0] != 'c') throw ScenarioError("schema", path, "structure keys look like c[k][i][j]");
  pos = 1;
  for (int t = 0; t < 3; ++t) {
    if (pos >= key.size() || key[pos] != '[') throw ScenarioError("schema", path, "structure keys look like c[k][i][j]");
    std::size_t close = key.find(']', pos);
    if (close == std::string::npos) throw ScenarioError("schema", path, "unterminated index");
    std::string num = key.substr(pos + 1, close - pos - 1);
    if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos)
      throw ScenarioError("schema", path, "bad index '" + num + "'");
    idx[t] = std::stoi(num);
    if (idx[t] >= n) throw ScenarioError("schema", path, "index out of range");
    pos = close + 1;
  }
  if (pos != key.size()) throw ScenarioError("schema", path, "trailing characters");
  return idx;
}

std::string poly_text(const JetPoly& f) { return to_string(f); }

json matrix_json(const PolyMatrix& M) {
  json rows = json::array();
  for (int i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < M.cols(); ++j) row.push_back(poly_text(M(i, j)));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError("syntax", "", e.what(), line_of(text, e.byte));
  }
  Scenario s;
  Reader rd;
  if (!root.is_object()) throw ScenarioError("schema", "", "top level must be an object");
  if (root.contains("id")) {
    if (!root["id"].is_string()) throw ScenarioError("schema", "id", "expected a string");
    s.id = root["id"].get<std::string>();
  }

  const json& jb = rd.field(root, "base", "");
  rd.m = rd.integer(rd.field(jb, "vars", "base"), "base.vars");
  rd.d = rd.integer(rd.field(jb, "order", "base"), "base.order");
  const json& jphi = rd.field(jb, "phi", "base");
  if (!jphi.is_array() || static_cast<int>(jphi.size()) != rd.m)
    throw ScenarioError("schema", "base.phi", "expected " + std::to_string(rd.m) + " components");
  std::vector<JetPoly> comps;
  for (int i = 0; i < rd.m; ++i) {
    std::string path = "base.phi[" + std::to_string(i) + "]";
    comps.push_back(rd.poly(jphi[i], path));
    if (!is_zero(comps.back().constant_term())) throw ScenarioError("phi_constant_term", path, "nonzero constant term");
  }
  BaseEndo phi(rd.m, rd.d, comps);
  if (!phi.invertible()) throw ScenarioError("not_invertible", "base.phi", "linear part is singular");
  s.base = std::make_shared<const Base>(phi);

  const json& je = rd.field(root, "bundle", "");
  int r = rd.integer(rd.field(je, "rank", "bundle"), "bundle.rank");
  PolyMatrix phiE = rd.matrix(rd.field(je, "phiE", "bundle"), r, r, "bundle.phiE");
  require_invertible(phiE, "bundle.phiE");
  s.E = std::make_shared<const HomBundle>(s.base, phiE);

  const json& jl = rd.field(root, "algebroid", "");
  int n = rd.integer(rd.field(jl, "rank", "algebroid"), "algebroid.rank");
  PolyMatrix phiL = rd.matrix(rd.field(jl, "phiL", "algebroid"), n, n, "algebroid.phiL");
  require_invertible(phiL, "algebroid.phiL");
  PolyMatrix anchor = rd.matrix(rd.field(jl, "anchor", "algebroid"), rd.m, n, "algebroid.anchor");
  Structure c(n, std::vector<std::vector<JetPoly>>(n, std::vector<JetPoly>(n, s.base->zero())));
  std::vector<std::vector<std::vector<bool>>> given(n, std::vector<std::vector<bool>>(n, std::vector<bool>(n, false)));
  if (jl.contains("c")) {
    const json& jc = jl["c"];
    if (!jc.is_object()) throw ScenarioError("schema", "algebroid.c", "expected an object");
    for (auto it = jc.begin(); it != jc.end(); ++it) {
      std::string path = "algebroid.c." + it.key();
      auto [k, i, j] = structure_key(it.key(), n, path);
      c[k][i][j] = rd.poly(it.value(), path);
      given[k][i][j] = true;
    }
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (given[k][i][j] && !given[k][j][i]) c[k][j][i] = -c[k][i][j];
  }
  s.L = std::make_shared<const HomAlgebroid>(s.base, phiL, anchor, c);

  Connection c0 = trivial_connection(s.E, s.L);
  if (root.contains("connections")) {
    const json& jc = root["connections"];
    if (!jc.is_object()) throw ScenarioError("schema", "connections", "expected an object");
    for (auto it = jc.begin(); it != jc.end(); ++it) {
      std::string path = "connections." + it.key();
      Connection conn = c0;
      const json* alpha = &it.value();
      if (alpha->is_object()) {
        if (alpha->contains("twist")) conn.twist = rd.integer((*alpha)["twist"], path + ".twist", -1000);
        alpha = &rd.field(*alpha, "alpha", path);
        path += ".alpha";
      }
      if (!alpha->is_array()) throw ScenarioError("schema", path, "expected a list of matrices");
      if (!alpha->empty()) {
        if (static_cast<int>(alpha->size()) != n)
          throw ScenarioError("schema", path, "expected " + std::to_string(n) + " matrices");
        for (int j = 0; j < n; ++j) conn.A[j] = rd.matrix((*alpha)[j], r, r, path + "[" + std::to_string(j) + "]");
      }
      s.connections.emplace_back(it.key(), conn);
    }
  }
  if (root.contains("gauges")) {
    const json& jg = root["gauges"];
    if (!jg.is_object()) throw ScenarioError("schema", "gauges", "expected an object");
    for (auto it = jg.begin(); it != jg.end(); ++it) {
      std::string path = "gauges." + it.key();
      PolyMatrix M = rd.matrix(it.value(), r, r, path);
      require_invertible(M, path);
      s.gauges.emplace_back(it.key(), Twisted{M, 1});
    }
  }
  if (root.contains("metrics")) {
    const json& jm = root["metrics"];
    if (!jm.is_object()) throw ScenarioError("schema", "metrics", "expected an object");
    for (auto it = jm.begin(); it != jm.end(); ++it)
      s.metrics.emplace_back(it.key(), MetricH{rd.matrix(it.value(), r, r, "metrics." + it.key())});
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("io", path, "cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string emit_scenario(const Scenario& s) {
  json root;
  if (!s.id.empty()) root["id"] = s.id;
  json phi = json::array();
  for (const auto& f : s.base->phi().components()) phi.push_back(poly_text(f));
  root["base"] = {{"vars", s.base->vars()}, {"order", s.base->order()}, {"phi", phi}};
  root["bundle"] = {{"rank", s.E->rank()}, {"phiE", matrix_json(s.E->phiE_matrix())}};
  json c = json::object();
  int n = s.L->rank();
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (!s.L->c(k, i, j).is_zero())
          c["c[" + std::to_string(k) + "][" + std::to_string(i) + "][" + std::to_string(j) + "]"] = poly_text(s.L->c(k, i, j));
  root["algebroid"] = {{"rank", n},
                       {"phiL", matrix_json(s.L->phiL_matrix())},
                       {"anchor", matrix_json(s.L->anchor_matrix())},
                       {"c", c}};
  json conns = json::object();
  for (const auto& [name, conn] : s.connections) {
    json alpha = json::array();
    for (const auto& A : conn.A) alpha.push_back(matrix_json(A));
    if (conn.twist == 1)
      conns[name] = alpha;
    else
      conns[name] = {{"alpha", alpha}, {"twist", conn.twist}};
  }
  root["connections"] = conns;
  json gauges = json::object();
  for (const auto& [name, g] : s.gauges) gauges[name] = matrix_json(g.M);
  root["gauges"] = gauges;
  json metrics = json::object();
  for (const auto& [name, h] : s.metrics) metrics[name] = matrix_json(h.H);
  root["metrics"] = metrics;
  return root.dump(2) + "\n";
}

std::string twisted_json(const Twisted& t) {
  json j = {{"twist", t.twist}, {"matrix", matrix_json(t.M)}};
  return j.dump();
}

std::string mform_json(const MForm& w) {
  json comps = json::array();
  for (const auto& t : w.c) comps.push_back(matrix_json(t.M));
  json j = {{"degree", w.p}, {"twist", w.zero.twist}, {"components", comps}};
  return j.dump();
}

std::string report_json(const Report& r, bool timing) {
  json checks = json::array();
  int passed = 0;
  for (const auto& e : r.checks.entries) {
    json c;
    c["name"] = e.name;
    c["anchor"] = e.anchor;
    c["status"] = e.pass ? "pass" : "fail";
    c["residual"] = e.residual;
    c["order"] = e.order;
    if (timing) c["time_ms"] = e.time_ms;
    c["detail"] = e.detail;
    checks.push_back(c);
    passed += e.pass ? 1 : 0;
  }
  json root;
  root["scenario"] = r.scenario;
  root["order"] = r.order;
  root["checks"] = checks;
  root["summary"] = {{"passed", passed}, {"failed", static_cast<int>(r.checks.entries.size()) - passed}};
  return root.dump(2) + "\n";
}

std::string report_text(const Report& r) {
  std::ostringstream out;
  out << "scenario " << (r.scenario.empty() ? "(unnamed)" : r.scenario) << ", order " << r.order << "\n";
  for (const auto& e : r.checks.entries) {
    out << (e.pass ? "PASS " : "FAIL ") << e.name << "  [" << e.anchor << "]  order " << e.order;
    if (!e.pass) out << "  residual " << e.residual;
    if (!e.detail.empty()) out << "  (" << e.detail << ")";
    out << "\n";
  }
  return out.str();
}

}  // namespace homalg
