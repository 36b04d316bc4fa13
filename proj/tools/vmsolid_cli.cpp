#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "vmsolid/cases.hpp"
#include "vmsolid/diagnostics.hpp"
#include "vmsolid/error.hpp"
#include "vmsolid/simulation.hpp"
#include "vmsolid/verification.hpp"

namespace {

using namespace vmsolid;

constexpr int kOk = 0;
constexpr int kNumerical = 1;
constexpr int kUsage = 2;

CaseConfig load_case(const std::string& source, const std::vector<std::string>& overrides) {
  CaseConfig config;
  if (std::filesystem::is_regular_file(source)) {
    config = parse_case_file(source);
  } else {
    const auto names = preset_names();
    if (std::find(names.begin(), names.end(), source) == names.end())
      throw ConfigError("'" + source + "' is neither a case file nor a preset");
    config = preset(source);
  }
  for (const auto& o : overrides) apply_override(config, o);
  validate(config);
  return config;
}

int cmd_run(const std::string& source, const std::vector<std::string>& overrides,
            const std::string& out_dir, bool quiet) {
  const CaseConfig config = load_case(source, overrides);
  RunOptions options;
  options.out_dir = out_dir;
  options.quiet = quiet;
  options.log = &std::cerr;
  const RunResult result = run_case(config, options);
  if (!quiet) {
    print_report(std::cout, result.report);
    for (const auto& p : result.probes)
      if (p.size())
        std::cout << std::left << std::setw(20) << "probe " << p.column_name() << " = "
                  << std::setprecision(10) << p.values().back() << "\n";
  }
  if (result.report.exit_status != 0) std::cerr << "error: " << result.report.error << "\n";
  return result.report.exit_status;
}

int cmd_study(const std::string& name, std::vector<int> densities,
              const std::vector<std::string>& overrides, const std::string& out_dir,
              bool quiet) {
  const CaseConfig base = load_case(name, overrides);
  if (base.geometry.kind != "cook")
    throw ConfigError("case '" + name + "' has no mesh density parameter (geometry.n)");
  if (base.output.probes.empty()) throw ConfigError("case '" + name + "' has no probe");
  if (densities.empty()) throw ConfigError("no mesh densities given");
  std::sort(densities.begin(), densities.end());
  densities.erase(std::unique(densities.begin(), densities.end()), densities.end());

  std::vector<double> tip, theta;
  std::vector<std::vector<std::string>> rows;
  for (int n : densities) {
    CaseConfig c = base;
    c.geometry.n = n;
    RunOptions options;
    options.quiet = true;
    const RunResult r = run_case(c, options);
    if (r.report.exit_status != 0) throw NumericalError(r.report.error);
    tip.push_back(r.probes[0].values().back());
    theta.push_back(pressure_oscillation_indicator(r.mesh, r.state.p));
    std::ostringstream a, b, order;
    a << std::setprecision(12) << tip.back();
    b << std::setprecision(6) << theta.back();
    const std::size_t k = tip.size() - 1;
    if (k >= 2) {
      const double num = std::abs(tip[k - 1] - tip[k - 2]);
      const double den = std::abs(tip[k] - tip[k - 1]);
      const double ratio = static_cast<double>(densities[k]) / densities[k - 1];
      if (den > 0.0 && num > 0.0) order << std::setprecision(4) << std::log(num / den) / std::log(ratio);
    }
    rows.push_back({std::to_string(n), a.str(), b.str(), order.str()});
  }
  const std::vector<std::string> header{"n", "tip", "theta", "order"};
  if (!quiet) write_csv_table(std::cout, header, rows);
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::ofstream out(std::filesystem::path(out_dir) / (base.name + "_study.csv"));
    write_csv_table(out, header, rows);
  }
  return kOk;
}

int cmd_presets() {
  for (const auto& name : preset_names()) {
    const CaseConfig c = preset(name);
    std::cout << std::left << std::setw(18) << name << to_string(c.material.kind) << ", "
              << to_string(c.solver.scheme) << ", t_end " << c.t_end << "\n";
  }
  return kOk;
}

int cmd_verify(const std::vector<int>& only) {
  bool all = true;
  for (const auto& entry : acceptance_criteria()) {
    if (!only.empty() && std::find(only.begin(), only.end(), entry.id) == only.end()) continue;
    const CriterionResult r = entry.run();
    std::cout << (r.passed ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << "\n";
    for (const auto& d : r.details) std::cout << "    " << d << "\n";
    std::cout.flush();
    all = all && r.passed;
  }
  return all ? kOk : kNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stabilized mixed finite elements for elastic solids"};
  app.require_subcommand(1);

  std::vector<std::string> overrides;
  std::string out_dir;
  bool quiet = false;

  auto* run = app.add_subcommand("run", "Run a case file or preset");
  std::string source;
  run->add_option("case", source, "Case file or preset name")->required();
  run->add_option("--set", overrides, "Override key=value (repeatable)");
  run->add_option("--out", out_dir, "Output directory");
  run->add_flag("--quiet", quiet, "Suppress progress and summary");

  auto* study = app.add_subcommand("study", "Mesh convergence study of a preset");
  std::string study_case;
  std::vector<int> densities{4, 8, 16, 32};
  study->add_option("case", study_case, "Case file or preset name")->required();
  study->add_option("--n", densities, "Mesh densities")->delimiter(',');
  study->add_option("--set", overrides, "Override key=value (repeatable)");
  study->add_option("--out", out_dir, "Output directory");
  study->add_flag("--quiet", quiet, "Suppress the table on stdout");

  app.add_subcommand("presets", "List built-in presets");

  auto* verify = app.add_subcommand("verify", "Run the acceptance checks");
  std::vector<int> only;
  verify->add_option("--only", only, "Criterion ids to run")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (run->parsed()) return cmd_run(source, overrides, out_dir, quiet);
    if (study->parsed()) return cmd_study(study_case, densities, overrides, out_dir, quiet);
    if (verify->parsed()) return cmd_verify(only);
    return cmd_presets();
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const MeshError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  }
}
