#include "vmsolid/verification.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

#include "vmsolid/diagnostics.hpp"
#include "vmsolid/error.hpp"

namespace vmsolid {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string kv(const std::string& key, double value) {
  std::ostringstream s;
  s << key << " = " << std::setprecision(6) << value;
  return s.str();
}

std::string kv(const std::string& key, const std::vector<double>& values) {
  std::ostringstream s;
  s << key << " = [" << std::setprecision(6);
  for (std::size_t i = 0; i < values.size(); ++i) s << (i ? ", " : "") << values[i];
  s << "]";
  return s.str();
}

CriterionResult begin(int id, const std::string& name) {
  CriterionResult r;
  r.id = id;
  r.name = name;
  return r;
}

void finish(CriterionResult& r, Clock::time_point t0, double budget_s) {
  r.seconds = seconds_since(t0);
  r.details.push_back(kv("runtime_s", r.seconds) + " (budget " +
                      std::to_string(static_cast<int>(budget_s)) + ")");
  if (r.seconds > budget_s) r.passed = false;
}

RunResult run_quiet(const CaseConfig& c, const RunOptions& base = {}) {
  RunOptions o = base;
  o.quiet = true;
  return run_case(c, o);
}

}  // namespace

std::vector<OscillationPeriod> split_periods(const std::vector<double>& t,
                                             const std::vector<double>& v) {
  std::vector<OscillationPeriod> out;
  if (t.size() < 3 || t.size() != v.size()) return out;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double mid = 0.5 * (*lo + *hi);
  const double band = 0.1 * 0.5 * (*hi - *lo);
  if (!(band > 0.0)) return out;

  // Upward crossings of mid, armed only after dropping below mid - band.
  std::vector<double> crossings;
  bool armed = v[0] < mid - band;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] < mid - band) armed = true;
    if (armed && v[i - 1] < mid && v[i] >= mid) {
      const double s = (mid - v[i - 1]) / (v[i] - v[i - 1]);
      crossings.push_back(t[i - 1] + s * (t[i] - t[i - 1]));
      armed = false;
    }
  }
  for (std::size_t k = 0; k + 1 < crossings.size(); ++k) {
    OscillationPeriod p;
    p.t_begin = crossings[k];
    p.t_end = crossings[k + 1];
    double integral = 0.0, vmin = 1e300, vmax = -1e300;
    for (std::size_t i = 1; i < t.size(); ++i) {
      const double a = std::max(t[i - 1], p.t_begin), b = std::min(t[i], p.t_end);
      if (b <= a) continue;
      auto value_at = [&](double x) {
        return v[i - 1] + (v[i] - v[i - 1]) * (x - t[i - 1]) / (t[i] - t[i - 1]);
      };
      const double va = value_at(a), vb = value_at(b);
      integral += 0.5 * (va + vb) * (b - a);
      vmin = std::min({vmin, va, vb});
      vmax = std::max({vmax, va, vb});
    }
    p.mean = integral / (p.t_end - p.t_begin);
    p.amplitude = 0.5 * (vmax - vmin);
    out.push_back(p);
  }
  return out;
}

double steady_probe_value(const CaseConfig& config) {
  const RunResult r = run_quiet(config);
  if (r.probes.empty() || r.probes[0].size() == 0)
    throw ConfigError("case has no probe");
  return r.probes[0].values().back();
}

double divergence_ratio(const Mesh& mesh, const Vector& u) {
  double div2 = 0.0, grad2 = 0.0;
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const ElementGeometry g = element_geometry(mesh, e);
    const Mat3 G = element_gradient(g, mesh, e, u);
    div2 += g.volume * G.trace() * G.trace();
    grad2 += g.volume * G.squaredNorm();
  }
  return std::sqrt(div2 / std::max(grad2, 1e-300));
}

Mesh perturb_interior(const Mesh& mesh, double fraction, unsigned seed) {
  std::vector<char> boundary(mesh.num_nodes(), 0);
  for (const auto& f : mesh.boundary_facets())
    for (int k = 0; k < mesh.dim(); ++k) boundary[f.nodes[k]] = 1;
  std::vector<double> size(mesh.num_nodes(), 1e300);
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const double h = element_geometry(mesh, e).h;
    for (int a : mesh.element(e)) size[a] = std::min(size[a], h);
  }
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<Vec3> nodes = mesh.nodes_reference();
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    if (boundary[a]) continue;
    for (int i = 0; i < mesh.dim(); ++i) nodes[a][i] += fraction * size[a] * uni(rng);
  }
  std::vector<Element> elements = mesh.elements();
  return Mesh(mesh.dim(), nodes, elements, mesh.boundary_facets());
}

double patch_test_error(const Mesh& mesh, const Mat3& A, const Vec3& b, double nu) {
  const Material material = make_material(MaterialKind::linear_elastic, 1.0, nu, 1.0);
  const int dim = mesh.dim();
  const std::vector<double> tau =
      compute_tau_field(mesh, material, 1.0, StabilizationParams{});
  LinearSystem sys = assemble_steady_linear(mesh, material, {}, tau);
  auto exact = [&](std::size_t a) -> Vec3 {
    Vec3 u = A * mesh.nodes_current()[a] + b;
    if (dim == 2) u.z() = 0.0;
    return u;
  };
  for (const auto& tag : mesh.tags())
    for (int a : mesh.nodes_with_tag(tag))
      for (int i = 0; i < dim; ++i) sys.dirichlet[a * dim + i] = exact(a)[i];
  sys = apply_dirichlet(std::move(sys));
  const Vector x = solve_linear_system(sys.matrix, sys.rhs);
  double err = 0.0, scale = 0.0;
  for (std::size_t a = 0; a < mesh.num_nodes(); ++a) {
    const Vec3 ue = exact(a);
    for (int i = 0; i < dim; ++i) {
      err = std::max(err, std::abs(x(static_cast<Eigen::Index>(a) * dim + i) - ue[i]));
      scale = std::max(scale, std::abs(ue[i]));
    }
  }
  return err / scale;
}

namespace {

constexpr double kPi = std::numbers::pi;

struct MmsExact {
  double mu, K;

  Vec3 u(const Vec3& x) const {
    return {std::sin(kPi * x.x()) * std::sin(kPi * x.y()),
            4.0 * x.x() * (1.0 - x.x()) * x.y() * (1.0 - x.y()), 0.0};
  }
  Mat3 grad(const Vec3& x) const {
    Mat3 G = Mat3::Zero();
    G(0, 0) = kPi * std::cos(kPi * x.x()) * std::sin(kPi * x.y());
    G(0, 1) = kPi * std::sin(kPi * x.x()) * std::cos(kPi * x.y());
    G(1, 0) = 4.0 * (1.0 - 2.0 * x.x()) * x.y() * (1.0 - x.y());
    G(1, 1) = 4.0 * x.x() * (1.0 - x.x()) * (1.0 - 2.0 * x.y());
    return G;
  }
  double p(const Vec3& x) const { return K * grad(x).trace(); }
  Mat3 sigma(const Vec3& x) const {
    const Mat3 G = grad(x);
    return p(x) * Mat3::Identity() + linear_dev_stress(G, mu);
  }
  /// f = -div sigma by central differences of the exact stress.
  Vec3 force(const Vec3& x) const {
    const double d = 1e-5;
    Vec3 div = Vec3::Zero();
    for (int j = 0; j < 2; ++j) {
      Vec3 e = Vec3::Zero();
      e[j] = d;
      div += (sigma(x + e) - sigma(x - e)).col(j) / (2.0 * d);
    }
    div.z() = 0.0;
    return -div;
  }
};

}  // namespace

MmsErrors manufactured_solution_errors(int n, double nu) {
  BoxSpec spec;
  spec.dim = 2;
  spec.extents = Vec3(1.0, 1.0, 0.0);
  spec.subdivisions = {n, n, 1};
  const Mesh mesh = generate_box_mesh(spec);
  const Material material = make_material(MaterialKind::linear_elastic, 1.0, nu, 1.0);
  const MmsExact exact{material.moduli.mu, material.moduli.K};

  std::vector<BoundaryCondition> bcs;
  for (const char* tag : {"xmin", "xmax", "ymin", "ymax"}) bcs.push_back(DirichletBC{tag, Vec3::Zero(), {true, true, true}, {}});
  BodyForceBC body;
  body.field = [exact](const Vec3& x) { return exact.force(x); };
  bcs.push_back(body);

  SolverConfig config;
  config.scheme = Scheme::steady;
  const SteadySolution sol = solve_steady(mesh, material, bcs, config);

  const QuadratureRule q = simplex_quadrature(2, 5);
  MmsErrors err;
  err.h = 1.0 / n;
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto nodes = mesh.element(e);
    const double V = mesh.signed_volume(e);
    for (std::size_t k = 0; k < q.points.size(); ++k) {
      Vec3 x = Vec3::Zero(), uh = Vec3::Zero();
      double ph = 0.0;
      for (int a = 0; a < 3; ++a) {
        const double l = q.points[k][a];
        x += l * mesh.nodes_current()[nodes[a]];
        uh.x() += l * sol.u(2 * nodes[a]);
        uh.y() += l * sol.u(2 * nodes[a] + 1);
        ph += l * sol.p(nodes[a]);
      }
      err.u_l2 += q.weights[k] * V * (uh - exact.u(x)).squaredNorm();
      err.p_l2 += q.weights[k] * V * std::pow(ph - exact.p(x), 2);
    }
  }
  err.u_l2 = std::sqrt(err.u_l2);
  err.p_l2 = std::sqrt(err.p_l2);
  return err;
}

double bdf_oracle_error(Scheme scheme, int steps) {
  const double g0 = 1.0, omega = 2.0 * kPi, t_end = 0.75;
  BoxSpec spec;
  spec.dim = 2;
  spec.extents = Vec3(1.0, 1.0, 0.0);
  spec.subdivisions = {1, 1, 1};
  Mesh mesh = generate_box_mesh(spec);
  const Material material = make_material(MaterialKind::linear_elastic, 100.0, 0.3, 1.0);
  BodyForceBC gravity;
  gravity.value = Vec3(0.0, -g0, 0.0);
  gravity.per_unit_mass = true;
  gravity.time.kind = TimeFunction::Kind::cosine;
  gravity.time.omega = omega;
  const std::vector<BoundaryCondition> bcs{gravity};

  SolverConfig config;
  config.scheme = scheme;
  config.dt = t_end / steps;
  State state = initial_state(mesh, material);
  Vector a0 = Vector::Zero(state.u.size());
  for (std::size_t a = 0; a < mesh.num_nodes(); ++a) a0(2 * static_cast<Eigen::Index>(a) + 1) = -g0;
  seed_history(state, Vector::Zero(state.u.size()), a0, config.dt);
  for (int n = 0; n < steps; ++n) advance_step(mesh, material, state, config, bcs);

  const double exact = -g0 / (omega * omega) * (1.0 - std::cos(omega * t_end));
  double err = 0.0;
  for (std::size_t a = 0; a < mesh.num_nodes(); ++a)
    err = std::max(err, std::abs(state.u(2 * static_cast<Eigen::Index>(a) + 1) - exact));
  return err;
}

double tangent_fd_error(unsigned seed, double j_min, double j_max, double* J_out) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const Material material = make_material(MaterialKind::neo_hookean, 10.0, 0.3, 1.0);

  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<Vec3> nodes{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};
    for (auto& x : nodes)
      for (int i = 0; i < 3; ++i) x[i] += 0.15 * uni(rng);
    const Mesh mesh(3, nodes, {Element{0, 1, 2, 3}}, {});
    const ElementGeometry g = element_geometry(mesh, 0);
    Mat3 F_prev = Mat3::Identity();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) F_prev(i, j) += 0.25 * uni(rng);
    std::vector<Vec3> du(4);
    for (auto& d : du)
      for (int i = 0; i < 3; ++i) d[i] = 0.15 * uni(rng);
    if (F_prev.determinant() <= 0.0) continue;
    const ElementForce ref = element_internal_force(g, 3, F_prev, du, material, true);
    const double J = ref.F.determinant();
    if (J < j_min || J > j_max) continue;
    if (J_out) *J_out = J;

    const double eps = 1e-6;
    Matrix fd(12, 12);
    for (int c = 0; c < 12; ++c) {
      auto plus = du, minus = du;
      plus[c / 3][c % 3] += eps;
      minus[c / 3][c % 3] -= eps;
      fd.col(c) = (element_internal_force(g, 3, F_prev, plus, material, true).force -
                   element_internal_force(g, 3, F_prev, minus, material, true).force) /
                  (2.0 * eps);
    }
    return (ref.tangent - fd).cwiseAbs().maxCoeff() / ref.tangent.cwiseAbs().maxCoeff();
  }
  throw NumericalError("could not draw a state with J in the requested range");
}

double observed_order(const std::vector<double>& h, const std::vector<double>& err) {
  const std::size_t n = h.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(h[i]), y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

CriterionResult check_cook_convergence() {
  auto r = begin(1, "static Cook mesh convergence");
  const auto t0 = Clock::now();
  std::vector<double> d;
  for (int n : {4, 8, 16, 32}) {
    CaseConfig c = preset("cook_static");
    c.geometry.n = n;
    d.push_back(steady_probe_value(c));
  }
  bool increasing = true, decreasing = true, inside = true;
  for (std::size_t i = 0; i < d.size(); ++i) {
    inside = inside && d[i] > 6.0 && d[i] < 8.0;
    if (i) {
      increasing = increasing && d[i] > d[i - 1];
      decreasing = decreasing && d[i] < d[i - 1];
    }
  }
  const double self = std::abs(d[3] - d[2]) / std::abs(d[3]);
  r.details.push_back(kv("tip_uy(n=4,8,16,32)", d));
  r.details.push_back(kv("|d32-d16|/|d32|", self) + " (<= 0.02)");
  r.passed = (increasing || decreasing) && inside && self <= 0.02;
  finish(r, t0, 60.0);
  return r;
}

CriterionResult check_checkerboard() {
  auto r = begin(2, "checkerboard suppression");
  const auto t0 = Clock::now();
  CaseConfig c = preset("cook_static");
  c.geometry.n = 16;
  const RunResult stabilized = run_quiet(c);
  const double stab = pressure_oscillation_indicator(stabilized.mesh, stabilized.state.p);
  c.solver.stabilization.enabled = false;
  const RunResult plain = run_quiet(c);
  const double galerkin = pressure_oscillation_indicator(plain.mesh, plain.state.p);
  r.details.push_back(kv("theta_stabilized", stab));
  r.details.push_back(kv("theta_galerkin", galerkin));
  r.details.push_back(kv("ratio", stab / galerkin) + " (<= 0.1)");
  r.passed = stab <= 0.1 * galerkin;
  finish(r, t0, 10.0);
  return r;
}

CriterionResult check_incompressible() {
  auto r = begin(3, "fully incompressible solve");
  const auto t0 = Clock::now();
  CaseConfig c = preset("cook_static");
  c.geometry.n = 32;
  c.material.nu = 0.5;
  try {
    const RunResult res = run_quiet(c);
    const double ratio = divergence_ratio(res.mesh, res.state.u);
    r.details.push_back(kv("inverse_bulk", build_material(c).moduli.inverse_bulk()));
    r.details.push_back(kv("tip_uy", res.probes[0].values().back()));
    r.details.push_back(kv("||div u||/||grad u||", ratio) + " (<= 0.05)");
    r.passed = res.state.u.allFinite() && res.state.p.allFinite() && ratio <= 0.05;
  } catch (const NumericalError& e) {
    r.details.push_back(std::string("error = ") + e.what());
  }
  finish(r, t0, 10.0);
  return r;
}

CriterionResult check_transient_cook() {
  auto r = begin(4, "transient Cook");
  const auto t0 = Clock::now();
  CaseConfig st = preset("cook_static");
  st.geometry.scale = 0.1;
  st.output.probes[0].point = {4.8, 6.0, 0.0};
  const double reference = steady_probe_value(st);

  CaseConfig c = preset("cook_transient");
  c.output.vtk_every = 0;
  const RunResult bdf2 = run_quiet(c);
  const auto p2 = split_periods(bdf2.probes[0].times(), bdf2.probes[0].values());
  c.solver.scheme = Scheme::bdf1;
  const RunResult bdf1 = run_quiet(c);
  const auto p1 = split_periods(bdf1.probes[0].times(), bdf1.probes[0].values());

  r.details.push_back(kv("static_tip_uy", reference));
  bool ok = bdf2.report.exit_status == 0 && bdf1.report.exit_status == 0;
  if (p2.empty()) {
    r.details.push_back("bdf2: no complete oscillation period");
    ok = false;
  } else {
    const double mean = p2.back().mean;
    const double rel = std::abs(mean - reference) / std::abs(reference);
    r.details.push_back(kv("bdf2_periods", static_cast<double>(p2.size())));
    r.details.push_back(kv("bdf2_final_period_mean", mean));
    r.details.push_back(kv("bdf2_rel_diff", rel) + " (<= 0.05)");
    ok = ok && rel <= 0.05;
  }
  std::vector<double> amps;
  for (const auto& p : p1) amps.push_back(p.amplitude);
  bool monotone = amps.size() >= 2;
  for (std::size_t i = 1; i < amps.size(); ++i) monotone = monotone && amps[i] < amps[i - 1];
  r.details.push_back(kv("bdf1_amplitudes", amps));
  r.passed = ok && monotone;
  finish(r, t0, 300.0);
  return r;
}

CriterionResult check_patch_test() {
  auto r = begin(5, "patch test");
  const auto t0 = Clock::now();
  Mat3 A;
  A << 0.01, -0.02, 0.015, 0.03, 0.005, -0.01, -0.02, 0.01, 0.02;
  const Vec3 b(0.1, -0.2, 0.3);
  BoxSpec s2;
  s2.dim = 2;
  s2.extents = Vec3(1.0, 1.0, 0.0);
  s2.subdivisions = {5, 5, 1};
  BoxSpec s3;
  s3.dim = 3;
  s3.subdivisions = {3, 3, 3};
  const double e2 = patch_test_error(perturb_interior(generate_box_mesh(s2), 0.25, 7), A, b, 0.3);
  const double e3 = patch_test_error(perturb_interior(generate_box_mesh(s3), 0.2, 11), A, b, 0.3);
  r.details.push_back(kv("rel_error_2d", e2) + " (<= 1e-10)");
  r.details.push_back(kv("rel_error_3d", e3) + " (<= 1e-10)");
  r.passed = e2 <= 1e-10 && e3 <= 1e-10;
  finish(r, t0, 5.0);
  return r;
}

CriterionResult check_manufactured_solution() {
  auto r = begin(6, "manufactured solution convergence");
  const auto t0 = Clock::now();
  std::vector<double> h, eu, ep;
  for (int n : {8, 16, 32, 64}) {
    const MmsErrors e = manufactured_solution_errors(n, 0.3);
    h.push_back(e.h);
    eu.push_back(e.u_l2);
    ep.push_back(e.p_l2);
  }
  const double ou = observed_order(h, eu), op = observed_order(h, ep);
  r.details.push_back(kv("u_l2", eu));
  r.details.push_back(kv("p_l2", ep));
  r.details.push_back(kv("order_u", ou) + " (>= 1.9)");
  r.details.push_back(kv("order_p", op) + " (>= 0.9)");
  r.passed = ou >= 1.9 && op >= 0.9;
  finish(r, t0, 60.0);
  return r;
}

CriterionResult check_bdf_orders() {
  auto r = begin(7, "BDF temporal orders");
  const auto t0 = Clock::now();
  auto orders = [](Scheme s, std::vector<double>& errs) {
    std::vector<double> out;
    for (int steps : {20, 40, 80, 160}) errs.push_back(bdf_oracle_error(s, steps));
    for (std::size_t i = 1; i < errs.size(); ++i) out.push_back(std::log2(errs[i - 1] / errs[i]));
    return out;
  };
  std::vector<double> e1, e2;
  const auto o1 = orders(Scheme::bdf1, e1);
  const auto o2 = orders(Scheme::bdf2, e2);
  r.details.push_back(kv("bdf1_errors", e1));
  r.details.push_back(kv("bdf1_orders", o1) + " (>= 0.9)");
  r.details.push_back(kv("bdf2_errors", e2));
  r.details.push_back(kv("bdf2_orders", o2) + " (>= 1.8)");
  r.passed = *std::min_element(o1.begin(), o1.end()) >= 0.9 &&
             *std::min_element(o2.begin(), o2.end()) >= 1.8;
  finish(r, t0, 30.0);
  return r;
}

CriterionResult check_tangent() {
  auto r = begin(8, "hyperelastic tangent");
  const auto t0 = Clock::now();
  double worst = 0.0;
  std::vector<double> js;
  for (unsigned seed = 1; seed <= 5; ++seed) {
    double J = 0.0;
    worst = std::max(worst, tangent_fd_error(seed, 0.7, 1.5, &J));
    js.push_back(J);
  }
  r.details.push_back(kv("J", js));
  r.details.push_back(kv("max_rel_error", worst) + " (<= 1e-5)");
  r.passed = worst <= 1e-5;
  finish(r, t0, 5.0);
  return r;
}

CriterionResult check_csm3() {
  auto r = begin(9, "CSM3 persistent oscillation");
  const auto t0 = Clock::now();
  const RunResult res = run_quiet(preset("csm3"));
  const auto& t = res.probes[0].times();
  const auto& v = res.probes[0].values();
  const auto periods = split_periods(t, v);
  std::vector<double> amps;
  for (const auto& p : periods) amps.push_back(p.amplitude);
  double mean = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) mean += 0.5 * (v[i] + v[i - 1]) * (t[i] - t[i - 1]);
  mean /= t.back() - t.front();
  r.details.push_back(kv("periods", static_cast<double>(periods.size())) + " (>= 5)");
  r.details.push_back(kv("amplitudes", amps));
  r.details.push_back(kv("mean_tip_uy", mean) + " (< 0)");
  bool ok = res.report.exit_status == 0 && periods.size() >= 5 && mean < 0.0;
  if (periods.size() >= 5) {
    const double decay = (amps[1] - amps[4]) / amps[1];
    r.details.push_back(kv("decay_p2_p5", decay) + " (<= 0.1)");
    ok = ok && decay <= 0.1;
  }
  if (!res.report.error.empty()) r.details.push_back("error = " + res.report.error);
  r.passed = ok;
  finish(r, t0, 600.0);
  return r;
}

CriterionResult check_bending_beam() {
  auto r = begin(10, "3D bending beam");
  const auto t0 = Clock::now();
  const CaseConfig c = preset("bending_beam_3d");
  double max_trace = 0.0, max_dev = 0.0, mass_err = 0.0;
  RunOptions o;
  o.on_step = [&](const Mesh& mesh, const State& state, const StepReport&) {
    const Material m = build_material(c);
    double mass = 0.0, mass0 = 0.0;
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
      const Mat3 dev = deviatoric_stress(m, deformation_gradient(mesh, e));
      max_trace = std::max(max_trace, std::abs(dev.trace()));
      max_dev = std::max(max_dev, dev.norm());
      mass += state.density[e] * mesh.signed_volume(e);
      mass0 += m.rho0 * mesh.signed_volume(e, true);
    }
    mass_err = std::max(mass_err, std::abs(mass - mass0) / mass0);
  };
  const RunResult res = run_quiet(c, o);
  const auto& v = res.probes[0].values();
  const double vmax = *std::max_element(v.begin(), v.end());
  const double vmin = *std::min_element(v.begin(), v.end());
  const double trace_ratio = max_trace / std::max(max_dev, 1e-300);
  r.details.push_back(kv("elements", static_cast<double>(res.mesh.num_elements())) + " (<= 500)");
  r.details.push_back(kv("steps", static_cast<double>(res.report.steps_completed)) + "/" +
                      std::to_string(res.report.steps_planned));
  r.details.push_back(kv("tip_ux_range", std::vector<double>{vmin, vmax}));
  r.details.push_back(kv("trace_dev_rel", trace_ratio) + " (<= 1e-10)");
  r.details.push_back(kv("mass_rel_error", mass_err) + " (<= 1e-10)");
  if (!res.report.error.empty()) r.details.push_back("error = " + res.report.error);
  r.passed = res.report.exit_status == 0 && res.mesh.num_elements() <= 500 &&
             res.report.steps_completed == res.report.steps_planned && trace_ratio <= 1e-10 &&
             mass_err <= 1e-10 && vmax > 0.0 && vmin < 0.0;
  finish(r, t0, 900.0);
  return r;
}

CriterionResult check_upsetting() {
  auto r = begin(11, "upsetting");
  const auto t0 = Clock::now();
  const RunResult res = run_quiet(preset("upsetting"));
  const double theta = pressure_oscillation_indicator(res.mesh, res.state.p);
  r.details.push_back(kv("steps", static_cast<double>(res.report.steps_completed)) + "/" +
                      std::to_string(res.report.steps_planned));
  r.details.push_back(kv("theta_final", theta) + " (<= 0.2)");
  if (!res.report.error.empty()) r.details.push_back("error = " + res.report.error);
  r.passed = res.report.exit_status == 0 &&
             res.report.steps_completed == res.report.steps_planned && theta <= 0.2;
  finish(r, t0, 300.0);
  return r;
}

std::vector<CriterionEntry> acceptance_criteria() {
  return {
      {1, "static Cook mesh convergence", check_cook_convergence},
      {2, "checkerboard suppression", check_checkerboard},
      {3, "fully incompressible solve", check_incompressible},
      {4, "transient Cook", check_transient_cook},
      {5, "patch test", check_patch_test},
      {6, "manufactured solution convergence", check_manufactured_solution},
      {7, "BDF temporal orders", check_bdf_orders},
      {8, "hyperelastic tangent", check_tangent},
      {9, "CSM3 persistent oscillation", check_csm3},
      {10, "3D bending beam", check_bending_beam},
      {11, "upsetting", check_upsetting},
  };
}

}  // namespace vmsolid
