#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "homalg/slice.hpp"

namespace homalg {

/// Input error with a field path such as "bundle.phiE[0][1]" and, for syntax errors, a line.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string kind, std::string path, const std::string& msg, int line = 0)
      : std::runtime_error(format(kind, path, msg, line)), kind_(std::move(kind)), path_(std::move(path)), line_(line) {}
  const std::string& kind() const { return kind_; }
  const std::string& path() const { return path_; }
  int line() const { return line_; }

 private:
  static std::string format(const std::string& kind, const std::string& path, const std::string& msg, int line);
  std::string kind_;
  std::string path_;
  int line_;
};

template <class T>
using Named = std::vector<std::pair<std::string, T>>;

struct Scenario {
  std::string id;
  std::shared_ptr<const Base> base;
  std::shared_ptr<const HomAlgebroid> L;
  std::shared_ptr<const HomBundle> E;
  Named<Connection> connections;
  Named<Twisted> gauges;
  Named<MetricH> metrics;

  const Connection& connection(const std::string& name) const;
  const Twisted& gauge(const std::string& name) const;
};

/// Throws ScenarioError.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);
/// Canonical JSON text; parse_scenario(emit_scenario(s)) emits the same text.
std::string emit_scenario(const Scenario& s);

struct Losses {
  int bracket = 1;
  int jacobi = 2;
  int representation = 2;
  int d_squared = 2;
  int connection = 1;
};

struct Config {
  std::optional<int> loss_override;
  Subspace subspace = Subspace::PhiE;
  bool timing = true;
  /// Run only checks whose name starts with one of these prefixes (all when empty).
  std::vector<std::string> only;
  /// Randomized draws per property in the report.
  int draws = 8;
  unsigned seed = 20240601u;
  Losses losses() const;
};

struct Report {
  std::string scenario;
  int order = 0;
  ValidationReport checks;
  bool ok() const { return checks.ok(); }
};

/// Check names in report order, each with its anchor phrase.
const std::vector<std::pair<std::string, std::string>>& anchor_table();

Report run_checks(const Scenario& s, const Config& cfg = {});
/// Deterministic JSON rendering; time_ms omitted when timing is off.
std::string report_json(const Report& r, bool timing);
std::string report_text(const Report& r);

// JSON fragments shared with the CLI.
std::string twisted_json(const Twisted& t);
std::string mform_json(const MForm& w);

}  // namespace homalg
