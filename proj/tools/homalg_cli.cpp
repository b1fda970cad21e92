#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "homalg/scenario.hpp"

using namespace homalg;

namespace {

std::string qmatrix_json(const QMatrix& m) {
  std::string out = "[";
  for (int i = 0; i < m.rows(); ++i) {
    out += i ? ",[" : "[";
    for (int j = 0; j < m.cols(); ++j) out += (j ? ",\"" : "\"") + to_string(m(i, j)) + "\"";
    out += "]";
  }
  return out + "]";
}

int exit_for(bool ok) { return ok ? 0 : 1; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hom-Lie algebroid connections: exact checks over truncated jets"};
  app.require_subcommand(1);

  std::string file;
  std::optional<int> loss_override;
  std::string subspace = "phiE";
  bool no_timing = false;
  std::vector<std::string> only;
  int draws = 8;
  unsigned seed = 20240601u;
  std::vector<std::string> conns;
  std::string gauge;
  std::string json_out;

  auto common = [&](CLI::App* sub) {
    sub->add_option("file", file, "scenario JSON")->required();
    sub->add_option("--loss-override", loss_override, "use this loss for every comparison budget");
    sub->add_option("--subspace", subspace, "full or phiE")->check(CLI::IsMember({"full", "phiE"}));
    sub->add_flag("--no-timing", no_timing, "omit wall times");
    sub->add_option("--only", only, "run checks with these name prefixes");
    sub->add_option("--draws", draws, "random draws per property")->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", seed, "random seed");
  };

  auto* validate = app.add_subcommand("validate", "run every check and print a summary");
  common(validate);
  auto* act = app.add_subcommand("act", "apply a gauge element to a connection");
  common(act);
  act->add_option("--conn", conns, "connection name")->required()->expected(1);
  act->add_option("--gauge", gauge, "gauge name")->required();
  auto* orbit = app.add_subcommand("orbit-eq", "search for a gauge element relating two connections");
  common(orbit);
  orbit->add_option("--conn", conns, "connection names (twice)")->required()->expected(2);
  auto* irr = app.add_subcommand("irreducible", "End connection kernel and irreducibility");
  common(irr);
  irr->add_option("--conn", conns, "connection name")->required()->expected(1);
  auto* slice = app.add_subcommand("slice", "slice dimensions, Coulomb operator and local slice differential");
  common(slice);
  slice->add_option("--conn", conns, "connection name")->required()->expected(1);
  auto* report = app.add_subcommand("report", "write the full JSON report");
  common(report);
  report->add_option("--json", json_out, "output path ('-' for stdout)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  Config cfg;
  cfg.loss_override = loss_override;
  cfg.subspace = parse_subspace(subspace);
  cfg.timing = !no_timing;
  cfg.only = only;
  cfg.draws = draws;
  cfg.seed = seed;
  int loss = cfg.losses().connection;

  try {
    Scenario s = load_scenario(file);

    if (*validate) {
      Report r = run_checks(s, cfg);
      std::cout << report_text(r);
      return exit_for(r.ok());
    }

    if (*report) {
      Report r = run_checks(s, cfg);
      std::string text = report_json(r, cfg.timing);
      if (json_out == "-") {
        std::cout << text;
      } else {
        std::ofstream out(json_out, std::ios::binary);
        if (!out) throw ScenarioError("io", json_out, "cannot write file");
        out << text;
      }
      int failed = 0;
      for (const auto& e : r.checks.entries) failed += e.pass ? 0 : 1;
      std::cerr << r.checks.entries.size() - failed << " passed, " << failed << " failed\n";
      return exit_for(r.ok());
    }

    if (*act) {
      const Connection& c = s.connection(conns[0]);
      const Twisted& g = s.gauge(gauge);
      if (!is_gauge_element(*s.E, g, 0)) {
        std::cout << "{\"error\":\"" << gauge << " is not a gauge element\"}\n";
        return 1;
      }
      Connection h = gauge_act(g, c);
      ValidationReport rep = validate_connection(h, loss);
      std::cout << "{\"alpha\":" << mform_json(alpha_form(h)) << ",\"valid\":" << (rep.ok() ? "true" : "false")
                << "}\n";
      return exit_for(rep.ok());
    }

    if (*orbit) {
      const Connection& a = s.connection(conns[0]);
      const Connection& b = s.connection(conns[1]);
      auto psi = find_gauge_transform(a, b, loss);
      std::cout << "{\"equivalent\":" << (psi ? "true" : "false");
      if (psi) std::cout << ",\"gauge\":" << twisted_json(*psi);
      std::cout << ",\"kernel_dims\":[" << end_kernel(a, loss).phiE_basis.size() << ","
                << end_kernel(b, loss).phiE_basis.size() << "]}\n";
      return exit_for(psi.has_value());
    }

    if (*irr) {
      const Connection& c = s.connection(conns[0]);
      EndKernel ker = end_kernel(c, loss);
      bool yes = ker.phiE_basis.size() == 1;
      std::cout << "{\"irreducible\":" << (yes ? "true" : "false") << ",\"kernel_dim\":" << ker.phiE_basis.size()
                << ",\"kernel_dim_full\":" << ker.basis.size() << ",\"order\":" << ker.order << "}\n";
      return exit_for(yes);
    }

    if (*slice) {
      const Connection& c = s.connection(conns[0]);
      LinOperator D = operator_matrix("d_nabla", c, 0, cfg.subspace, loss);
      SliceCheck sc = local_slice_check(c, loss);
      bool irr_c = is_irreducible(c, loss);
      std::cout << "{\"subspace\":\"" << to_string(cfg.subspace) << "\",\"order\":" << D.dom.order
                << ",\"D\":" << qmatrix_json(D.M) << ",\"closed\":" << (D.closed ? "true" : "false")
                << ",\"slice_dim\":" << slice_dimension(c, loss) << ",\"local_slice\":{\"domain\":" << sc.domain_dim
                << ",\"target\":" << sc.target_dim << ",\"rank\":" << sc.rank
                << ",\"injective\":" << (sc.injective ? "true" : "false")
                << ",\"surjective\":" << (sc.surjective ? "true" : "false") << "},\"irreducible\":"
                << (irr_c ? "true" : "false") << "}\n";
      return exit_for(irr_c ? sc.bijective() : !sc.injective);
    }
  } catch (const ScenarioError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
