#include "homalg/check.hpp"

#include <algorithm>

namespace homalg {

bool ValidationReport::ok() const {
  return std::all_of(entries.begin(), entries.end(), [](const CheckResult& c) { return c.pass; });
}

const CheckResult* ValidationReport::find(const std::string& name) const {
  for (const auto& e : entries)
    if (e.name == name) return &e;
  return nullptr;
}

void Tally::fail(const std::string& residual, const std::string& where) {
  if (pass_) {
    residual_ = residual;
    if (!where.empty()) detail_ = detail_.empty() ? where : detail_ + "; " + where;
  }
  pass_ = false;
}

bool Tally::compare(const JetPoly& a, const JetPoly& b, int loss, const std::string& where) {
  order_ = std::min(order_, compare_order(a, b, loss));
  JetPoly r = budget_residual(a, b, loss);
  if (r.is_zero()) return true;
  fail(to_string(r), where);
  return false;
}

bool Tally::compare(const Vec& a, const Vec& b, int loss, const std::string& where) {
  if (a.size() != b.size()) throw ShapeError("Tally: section lengths differ");
  bool ok = true;
  for (std::size_t i = 0; i < a.size(); ++i) ok = compare(a[i], b[i], loss, where) && ok;
  return ok;
}

bool Tally::compare(const Twisted& a, const Twisted& b, int loss, const std::string& where) {
  if (a.twist != b.twist) {
    fail("twist mismatch", where);
    return false;
  }
  bool ok = true;
  for (int i = 0; i < a.M.rows(); ++i)
    for (int j = 0; j < a.M.cols(); ++j) ok = compare(a.M(i, j), b.M(i, j), loss, where) && ok;
  return ok;
}

void Tally::require(bool cond, const std::string& what) {
  if (!cond) fail("false", what);
}

void Tally::note(const std::string& s) { detail_ = detail_.empty() ? s : detail_ + "; " + s; }

CheckResult Tally::result() const {
  CheckResult c;
  c.name = name_;
  c.pass = pass_;
  c.residual = residual_;
  c.order = order_;
  c.detail = detail_;
  return c;
}

}  // namespace homalg
