#include "vmsolid/solver.hpp"

#include <cmath>
#include <sstream>

#include "vmsolid/error.hpp"

namespace vmsolid {

std::string to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::steady: return "steady";
    case Scheme::quasistatic: return "quasistatic";
    case Scheme::bdf1: return "bdf1";
    case Scheme::bdf2: return "bdf2";
  }
  return "unknown";
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "steady") return Scheme::steady;
  if (s == "quasistatic") return Scheme::quasistatic;
  if (s == "bdf1") return Scheme::bdf1;
  if (s == "bdf2") return Scheme::bdf2;
  throw ConfigError("unknown time scheme '" + s + "'");
}

void validate(const SolverConfig& c) {
  if (!(c.dt > 0.0)) throw ConfigError("time.dt must be positive");
  if (!(c.newton_tol > 0.0 && c.newton_tol < 1.0))
    throw ConfigError("newton.tol must lie in (0, 1)");
  if (c.newton_max_iter < 1) throw ConfigError("newton.max_iter must be >= 1");
  if (!(c.linear.tol > 0.0 && c.linear.tol < 1.0))
    throw ConfigError("linear.tol must lie in (0, 1)");
  if (c.linear.max_iter < 1 || c.linear.restart < 1)
    throw ConfigError("linear.max_iter and linear.restart must be >= 1");
  if (!(c.stabilization.alpha > 0.0))
    throw ConfigError("stabilization.alpha must be positive");
}

State initial_state(const Mesh& mesh, const Material& material) {
  const auto nu = static_cast<Eigen::Index>(mesh.num_nodes() * mesh.dim());
  const auto np = static_cast<Eigen::Index>(mesh.num_nodes());
  State s;
  s.u = Vector::Zero(nu);
  s.u_n = Vector::Zero(nu);
  s.u_nm1 = Vector::Zero(nu);
  s.p = Vector::Zero(np);
  s.p_n = Vector::Zero(np);
  s.density.resize(mesh.num_elements());
  for (std::size_t e = 0; e < mesh.num_elements(); ++e)
    s.density[e] = update_density(material.rho0, jacobian_to_reference(mesh, e));
  return s;
}

void seed_history(State& state, const Vector& v0, const Vector& a0, double dt) {
  if (v0.size() != state.u_n.size() || (a0.size() != 0 && a0.size() != v0.size()))
    throw ConfigError("initial velocity field has the wrong size");
  Vector prev = state.u_n - dt * v0;
  if (a0.size() != 0) prev += 0.5 * dt * dt * a0;
  state.u_nm1 = prev;
  state.u_nm2.reset();
}

double bdf_leading_coefficient(Scheme scheme) {
  switch (scheme) {
    case Scheme::bdf1: return 1.0;
    case Scheme::bdf2: return 2.0;
    default: return 0.0;
  }
}

Vector bdf_acceleration(const State& s, double dt, Scheme scheme) {
  const double inv = 1.0 / (dt * dt);
  if (scheme == Scheme::bdf1) {
    if (!s.u_nm1) throw ConfigError("BDF1 needs u^{n-1}");
    return (s.u - 2.0 * s.u_n + *s.u_nm1) * inv;
  }
  if (scheme == Scheme::bdf2) {
    if (!s.u_nm1 || !s.u_nm2) throw ConfigError("BDF2 needs u^{n-1} and u^{n-2}");
    return (2.0 * s.u - 5.0 * s.u_n + 4.0 * *s.u_nm1 - *s.u_nm2) * inv;
  }
  return Vector::Zero(s.u.size());
}

namespace {

struct Evaluation {
  TransientSystem system;
  double residual_norm = 0.0;
};

Evaluation evaluate(const Mesh& mesh, const Material& material, const State& state,
                    const SolverConfig& config,
                    const std::vector<BoundaryCondition>& bcs, Scheme scheme,
                    std::span<const double> tau,
                    const std::map<int, double>& constrained) {
  const Vector delta_u = state.u - state.u_n;
  const bool dynamic = scheme == Scheme::bdf1 || scheme == Scheme::bdf2;
  const Vector acc = dynamic ? bdf_acceleration(state, config.dt, scheme)
                             : Vector::Zero(state.u.size());
  const double c_acc = bdf_leading_coefficient(scheme) / (config.dt * config.dt);
  const TransientFields fields{delta_u, state.p,           state.p_n,
                               acc,     c_acc,             state.t + config.dt,
                               state.subscale};
  Evaluation ev{assemble_transient(mesh, material, fields, bcs, tau), 0.0};
  Vector free = ev.system.residual;
  for (const auto& [dof, value] : constrained) free(dof) = 0.0;
  ev.residual_norm = free.norm();
  return ev;
}

NewtonResult correction(Evaluation& ev, const State& state,
                        const SolverConfig& config,
                        const std::map<int, double>& constrained) {
  LinearSystem& sys = ev.system.system;
  sys.dirichlet.clear();
  for (const auto& [dof, value] : constrained) sys.dirichlet[dof] = 0.0;
  const LinearSystem reduced = apply_dirichlet(std::move(sys));
  const Vector x = solve_linear_system(reduced.matrix, reduced.rhs, config.linear);
  NewtonResult r;
  const auto nu = state.u.size();
  r.delta_u = x.head(nu);
  r.delta_p = x.tail(x.size() - nu);
  r.residual_norm = ev.residual_norm;
  return r;
}

}  // namespace

NewtonResult newton_step(const Mesh& mesh, const Material& material,
                         const State& state, const SolverConfig& config,
                         const std::vector<BoundaryCondition>& bcs, Scheme scheme,
                         std::span<const double> tau) {
  const auto constrained = dirichlet_values(mesh, bcs, state.t + config.dt);
  Evaluation ev = evaluate(mesh, material, state, config, bcs, scheme, tau, constrained);
  return correction(ev, state, config, constrained);
}

StepReport advance_step(Mesh& mesh, const Material& material, State& state,
                        const SolverConfig& config,
                        const std::vector<BoundaryCondition>& bcs) {
  if (config.scheme == Scheme::steady)
    throw ConfigError("advance_step needs a time-stepping scheme, not 'steady'");
  StepReport report;
  Scheme scheme = config.scheme;
  if (scheme == Scheme::bdf2 && !state.u_nm2) {
    scheme = Scheme::bdf1;
    report.messages.push_back("step " + std::to_string(state.step + 1) +
                              ": BDF2 history incomplete, using BDF1");
  }
  if (scheme == Scheme::bdf1 && !state.u_nm1)
    throw ConfigError("BDF1 needs u^{n-1}");
  report.scheme_used = scheme;

  const double t_next = state.t + config.dt;
  StabilizationParams stab = config.stabilization;
  if (scheme == Scheme::quasistatic) stab.model = TauModel::static_model;
  const std::vector<double> tau = compute_tau_field(mesh, material, config.dt, stab);
  const auto targets = dirichlet_values(mesh, bcs, t_next);

  State trial = state;
  trial.u = state.u_n;
  trial.p = state.p_n;
  for (const auto& [dof, value] : targets) trial.u(dof) = value;

  double r0 = 0.0;
  std::vector<Vec3> subscale;
  for (int k = 0;; ++k) {
    Evaluation ev =
        evaluate(mesh, material, trial, config, bcs, scheme, tau, targets);
    subscale = std::move(ev.system.subscale);
    const double r = ev.residual_norm;
    report.residuals.push_back(r);
    report.force_scale = ev.system.force_scale;
    if (!std::isfinite(r))
      throw NewtonDivergence("Newton residual is not finite", report.residuals);
    if (k == 0) r0 = r;
    const double floor = std::max(config.newton_abs_tol, 1e-12 * ev.system.force_scale);
    if ((k > 0 && r <= config.newton_tol * r0) || r <= floor) break;
    if (k == config.newton_max_iter) {
      std::ostringstream msg;
      msg << "Newton did not converge in " << config.newton_max_iter
          << " iterations at t = " << t_next << " (residual " << r << ", initial "
          << r0 << ")";
      throw NewtonDivergence(msg.str(), report.residuals);
    }
    const NewtonResult step = correction(ev, trial, config, targets);
    trial.u += step.delta_u;
    trial.p += step.delta_p;
    report.iterations = k + 1;
  }

  const Vector delta = trial.u - state.u_n;
  const int dim = mesh.dim();
  std::vector<Vec3> motion(mesh.num_nodes(), Vec3::Zero());
  for (std::size_t a = 0; a < mesh.num_nodes(); ++a)
    for (int i = 0; i < dim; ++i) motion[a][i] = delta(static_cast<Eigen::Index>(a) * dim + i);
  mesh.move(motion);

  trial.u_nm2 = state.u_nm1;
  trial.u_nm1 = state.u_n;
  trial.u_n = trial.u;
  trial.p_n = trial.p;
  trial.subscale = std::move(subscale);
  trial.t = t_next;
  trial.step = state.step + 1;
  for (std::size_t e = 0; e < mesh.num_elements(); ++e)
    trial.density[e] = update_density(material.rho0, jacobian_to_reference(mesh, e));
  state = std::move(trial);
  return report;
}

SteadySolution solve_steady(const Mesh& mesh, const Material& material,
                            const std::vector<BoundaryCondition>& bcs,
                            const SolverConfig& config, double t) {
  StabilizationParams stab = config.stabilization;
  stab.model = TauModel::static_model;
  const std::vector<double> tau = compute_tau_field(mesh, material, config.dt, stab);
  const LinearSystem sys =
      apply_dirichlet(assemble_steady_linear(mesh, material, bcs, tau, t));
  const Vector x = solve_linear_system(sys.matrix, sys.rhs, config.linear);
  const auto nu = static_cast<Eigen::Index>(mesh.num_nodes() * mesh.dim());
  return {x.head(nu), x.tail(x.size() - nu)};
}

}  // namespace vmsolid
