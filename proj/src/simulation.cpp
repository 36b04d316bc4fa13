#include "vmsolid/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "vmsolid/diagnostics.hpp"
#include "vmsolid/error.hpp"

namespace vmsolid {

namespace {

constexpr double kInsideTol = 1e-10;

std::array<double, 4> barycentric(const ElementGeometry& g, int dim, const Vec3& x) {
  std::array<double, 4> lambda{0.0, 0.0, 0.0, 0.0};
  for (int a = 0; a <= dim; ++a)
    lambda[a] = 1.0 / (dim + 1) + g.gradients.col(a).dot(x - g.centroid);
  return lambda;
}

/// Element across the face opposite local node a, or -1 on the boundary.
std::vector<std::array<long, 4>> face_neighbours(const Mesh& mesh) {
  const int nn = mesh.dim() + 1;
  std::map<std::array<int, 3>, std::pair<long, int>> faces;
  std::vector<std::array<long, 4>> nb(mesh.num_elements(), {-1, -1, -1, -1});
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto nodes = mesh.element(e);
    for (int a = 0; a < nn; ++a) {
      std::array<int, 3> key{-1, -1, -1};
      int k = 0;
      for (int b = 0; b < nn; ++b)
        if (b != a) key[k++] = nodes[b];
      std::sort(key.begin(), key.begin() + k);
      auto [it, inserted] = faces.emplace(key, std::make_pair(static_cast<long>(e), a));
      if (!inserted) {
        nb[e][a] = it->second.first;
        nb[it->second.first][it->second.second] = static_cast<long>(e);
      }
    }
  }
  return nb;
}

PointLocation make_location(std::size_t e, std::array<double, 4> lambda, int dim) {
  for (int a = 0; a <= dim; ++a)
    if (lambda[a] > 1.0 - 1e-12) {
      lambda = {0.0, 0.0, 0.0, 0.0};
      lambda[a] = 1.0;
      break;
    }
  return {e, lambda};
}

double min_lambda(const std::array<double, 4>& l, int dim) {
  return *std::min_element(l.begin(), l.begin() + dim + 1);
}

}  // namespace

PointLocation locate_point(const Mesh& mesh, const Vec3& point, std::size_t start) {
  const int dim = mesh.dim();
  if (mesh.num_elements() == 0) throw ConfigError("cannot locate a point in an empty mesh");
  const auto nb = face_neighbours(mesh);
  std::size_t e = start < mesh.num_elements() ? start : 0;
  for (std::size_t step = 0; step < mesh.num_elements(); ++step) {
    const auto lambda = barycentric(reference_element_geometry(mesh, e), dim, point);
    int worst = 0;
    for (int a = 1; a <= dim; ++a)
      if (lambda[a] < lambda[worst]) worst = a;
    if (lambda[worst] >= -kInsideTol) return make_location(e, lambda, dim);
    if (nb[e][worst] < 0) break;
    e = static_cast<std::size_t>(nb[e][worst]);
  }
  std::size_t best = 0;
  double best_min = -1e300;
  std::array<double, 4> best_lambda{};
  for (std::size_t k = 0; k < mesh.num_elements(); ++k) {
    const auto lambda = barycentric(reference_element_geometry(mesh, k), dim, point);
    const double m = min_lambda(lambda, dim);
    if (m > best_min) {
      best_min = m;
      best = k;
      best_lambda = lambda;
    }
  }
  if (best_min < -kInsideTol) {
    std::ostringstream msg;
    msg << "point (" << point.x() << ", " << point.y() << ", " << point.z()
        << ") lies outside the mesh";
    throw ConfigError(msg.str());
  }
  return make_location(best, best_lambda, dim);
}

double interpolate(const Mesh& mesh, const PointLocation& loc, const Vector& nodal,
                   int components, int component) {
  const auto nodes = mesh.element(loc.element);
  double v = 0.0;
  for (int a = 0; a <= mesh.dim(); ++a)
    if (loc.barycentric[a] != 0.0)
      v += loc.barycentric[a] * nodal(static_cast<Eigen::Index>(nodes[a]) * components + component);
  return v;
}

std::vector<Mat3> element_deformation_gradients(const Mesh& mesh, const Vector& u) {
  std::vector<Mat3> F(mesh.num_elements());
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    F[e] = Mat3::Identity() + element_gradient(reference_element_geometry(mesh, e), mesh, e, u);
  }
  return F;
}

Vector nodal_von_mises(const Mesh& mesh, const Material& material, const Vector& u) {
  const auto F = element_deformation_gradients(mesh, u);
  Vector sum = Vector::Zero(static_cast<Eigen::Index>(mesh.num_nodes()));
  Vector weight = Vector::Zero(sum.size());
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const double vm = von_mises(deviatoric_stress(material, F[e]));
    const double V = mesh.signed_volume(e, true);
    for (int a : mesh.element(e)) {
      sum(a) += V * vm;
      weight(a) += V;
    }
  }
  for (Eigen::Index a = 0; a < sum.size(); ++a)
    if (weight(a) > 0.0) sum(a) /= weight(a);
  return sum;
}

namespace {

class Logger {
 public:
  Logger(RunReport& report, const RunOptions& options) : report_(report), options_(options) {}

  void info(const std::string& line) {
    report_.log.push_back(line);
    if (options_.log && !options_.quiet) *options_.log << line << "\n";
  }

 private:
  RunReport& report_;
  const RunOptions& options_;
};

std::string stamp(double t) {
  std::ostringstream s;
  s << std::setprecision(6) << t;
  return s.str();
}

double probe_value(const Mesh& mesh, const PointLocation& loc, ProbeField field,
                   const Vector& u, const Vector& p, const Vector& vm) {
  const int dim = mesh.dim();
  switch (field) {
    case ProbeField::u_x: return interpolate(mesh, loc, u, dim, 0);
    case ProbeField::u_y: return interpolate(mesh, loc, u, dim, 1);
    case ProbeField::u_z: return dim == 3 ? interpolate(mesh, loc, u, dim, 2) : 0.0;
    case ProbeField::p: return interpolate(mesh, loc, p);
    case ProbeField::von_mises: return interpolate(mesh, loc, vm);
  }
  return 0.0;
}

}  // namespace

RunResult run_case(const CaseConfig& config, const RunOptions& options) {
  validate(config);
  const auto t_start = std::chrono::steady_clock::now();
  RunResult result;
  RunReport& report = result.report;
  report.case_name = config.name;
  Logger log(report, options);

  result.mesh = build_mesh(config);
  Mesh& mesh = result.mesh;
  result.material = build_material(config);
  const Material& material = result.material;
  const auto bcs = build_boundary_conditions(config);
  check_boundary_conditions(mesh, bcs);

  std::vector<PointLocation> locations;
  bool needs_vm = false;
  for (const auto& p : config.output.probes) {
    const Vec3 x(p.point[0], p.point[1], p.point[2]);
    locations.push_back(locate_point(mesh, x));
    result.probes.emplace_back(to_string(p.field), x);
    needs_vm |= p.field == ProbeField::von_mises;
  }

  std::filesystem::path out_dir;
  if (!options.out_dir.empty()) {
    out_dir = options.out_dir;
    std::filesystem::create_directories(out_dir);
    const auto case_path = out_dir / (config.name + ".case");
    std::ofstream(case_path) << serialize_case(config);
    report.output_files.push_back(case_path.string());
  }

  log.info("case " + config.name + ": " + std::to_string(mesh.num_nodes()) + " nodes, " +
           std::to_string(mesh.num_elements()) + " elements, scheme " +
           to_string(config.solver.scheme));

  State& state = result.state;
  state = initial_state(mesh, material);

  auto sample = [&](double t) {
    const Vector vm = needs_vm ? nodal_von_mises(mesh, material, state.u) : Vector();
    for (std::size_t i = 0; i < locations.size(); ++i)
      result.probes[i].append(
          t, probe_value(mesh, locations[i], config.output.probes[i].field, state.u, state.p, vm));
  };
  auto snapshot = [&](int step) {
    if (out_dir.empty()) return;
    const auto F = element_deformation_gradients(mesh, state.u);
    VtkSnapshot s;
    s.mesh = &mesh;
    s.time = state.t;
    s.displacement = state.u;
    s.pressure = state.p;
    s.von_mises = nodal_von_mises(mesh, material, state.u);
    s.jacobian.resize(static_cast<Eigen::Index>(mesh.num_elements()));
    s.density.resize(s.jacobian.size());
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
      const double J = F[e].determinant();
      s.jacobian(static_cast<Eigen::Index>(e)) = J;
      s.density(static_cast<Eigen::Index>(e)) = material.rho0 / J;
    }
    std::ostringstream name;
    name << config.name << "_" << std::setw(5) << std::setfill('0') << step << ".vtk";
    const auto path = out_dir / name.str();
    write_vtk_file(path.string(), s);
    report.output_files.push_back(path.string());
  };

  if (config.solver.scheme == Scheme::steady) {
    report.steps_planned = 1;
    const SteadySolution sol = solve_steady(mesh, material, bcs, config.solver, config.t_end);
    state.u = sol.u;
    state.u_n = sol.u;
    state.p = sol.p;
    state.p_n = sol.p;
    state.t = config.t_end;
    state.step = 1;
    report.steps_completed = 1;
    report.newton_iterations.push_back(1);
    report.final_residuals.push_back(0.0);
    sample(state.t);
    if (options.on_step) options.on_step(mesh, state, StepReport{});
    snapshot(1);
    log.info("steady solve done");
  } else {
    const double dt = config.solver.dt;
    const int steps = static_cast<int>(std::llround(config.t_end / dt));
    report.steps_planned = steps;
    if (std::abs(steps * dt - config.t_end) > 1e-9 * std::max(1.0, config.t_end))
      log.info("t_end is not a multiple of dt; running " + std::to_string(steps) +
               " steps to t = " + stamp(steps * dt));
    if (has_initial_velocity(config))
      seed_history(state, initial_velocity(config, mesh), Vector(), dt);
    sample(0.0);
    snapshot(0);
    for (int n = 0; n < steps; ++n) {
      StepReport step;
      try {
        step = advance_step(mesh, material, state, config.solver, bcs);
      } catch (const NumericalError& e) {
        report.error = "step " + std::to_string(n + 1) + " (t = " + stamp(state.t + dt) +
                       "): " + e.what();
        report.exit_status = 1;
        log.info("error: " + report.error);
        break;
      }
      for (const auto& m : step.messages) log.info(m);
      report.steps_completed = state.step;
      report.newton_iterations.push_back(step.iterations);
      report.final_residuals.push_back(step.residuals.empty() ? 0.0 : step.residuals.back());
      sample(state.t);
      if (options.on_step) options.on_step(mesh, state, step);
      const bool last = n + 1 == steps;
      if (last || (config.output.vtk_every > 0 && state.step % config.output.vtk_every == 0))
        snapshot(state.step);
      if (!options.quiet && options.log && (state.step % 50 == 0 || last))
        *options.log << "  step " << state.step << "/" << steps << "  t = " << stamp(state.t)
                     << "  newton " << step.iterations << "\n";
    }
    if (report.exit_status != 0 && report.steps_completed > 0) snapshot(report.steps_completed);
  }

  if (!out_dir.empty()) {
    for (std::size_t i = 0; i < result.probes.size(); ++i) {
      if (result.probes[i].size() == 0) continue;
      const auto path = out_dir / (config.name + "_probe_" + config.output.probes[i].name + ".csv");
      write_probe_csv_file(path.string(), result.probes[i]);
      report.output_files.push_back(path.string());
    }
  }
  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  log.info("finished in " + stamp(report.wall_time) + " s, " +
           std::to_string(report.steps_completed) + "/" + std::to_string(report.steps_planned) +
           " steps");
  if (!out_dir.empty()) {
    const auto path = out_dir / (config.name + ".log");
    std::ofstream out(path);
    for (const auto& line : report.log) out << line << "\n";
    report.output_files.push_back(path.string());
  }
  return result;
}

void print_report(std::ostream& out, const RunReport& r) {
  int total = 0, worst = 0;
  for (int k : r.newton_iterations) {
    total += k;
    worst = std::max(worst, k);
  }
  out << std::left;
  out << std::setw(20) << "case" << r.case_name << "\n";
  out << std::setw(20) << "status" << (r.exit_status == 0 ? "ok" : "FAILED") << "\n";
  out << std::setw(20) << "steps" << r.steps_completed << "/" << r.steps_planned << "\n";
  out << std::setw(20) << "newton iterations" << total << " total, " << worst << " max/step\n";
  if (!r.final_residuals.empty())
    out << std::setw(20) << "final residual" << std::setprecision(3) << std::scientific
        << r.final_residuals.back() << std::defaultfloat << "\n";
  out << std::setw(20) << "wall time" << std::setprecision(3) << r.wall_time << " s\n";
  for (const auto& f : r.output_files) out << std::setw(20) << "output" << f << "\n";
  if (!r.error.empty()) out << std::setw(20) << "error" << r.error << "\n";
}

}  // namespace vmsolid
