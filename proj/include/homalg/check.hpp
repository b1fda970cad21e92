#pragma once

#include <string>
#include <vector>

#include "homalg/forms.hpp"

namespace homalg {

struct CheckResult {
  std::string name;
  std::string anchor;
  bool pass = true;
  std::string residual = "0";
  int order = 0;
  double time_ms = 0;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> entries;
  bool ok() const;
  const CheckResult* find(const std::string& name) const;
};

/// Accumulates comparisons for one check: first nonzero residual wins, order is the minimum used.
class Tally {
 public:
  Tally(std::string name, int base_order) : name_(std::move(name)), order_(base_order) {}

  bool compare(const JetPoly& a, const JetPoly& b, int loss, const std::string& where = {});
  bool compare(const Vec& a, const Vec& b, int loss, const std::string& where = {});
  bool compare(const Twisted& a, const Twisted& b, int loss, const std::string& where = {});
  template <class V>
  bool compare(const Form<V>& a, const Form<V>& b, int loss, const std::string& where = {}) {
    bool ok = true;
    for (std::size_t i = 0; i < a.c.size(); ++i) ok = compare(a.c[i], b.c.at(i), loss, where) && ok;
    return ok;
  }
  /// Records a boolean fact that has no polynomial residual.
  void require(bool cond, const std::string& what);
  void note(const std::string& s);

  bool pass() const { return pass_; }
  CheckResult result() const;

 private:
  void fail(const std::string& residual, const std::string& where);

  std::string name_;
  bool pass_ = true;
  std::string residual_ = "0";
  int order_;
  std::string detail_;
};

}  // namespace homalg
