#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vmsolid/error.hpp"
#include "vmsolid/fem.hpp"
#include "vmsolid/linear_solver.hpp"
#include "vmsolid/vms.hpp"

namespace vmsolid {

/// steady: one linear solve on the frozen mesh (linear elastic only).
/// quasistatic: moving-mesh Newton steps without inertia.
/// bdf1 / bdf2: moving-mesh elastodynamics.
enum class Scheme { steady, quasistatic, bdf1, bdf2 };

std::string to_string(Scheme scheme);
Scheme scheme_from_string(const std::string& s);

struct SolverConfig {
  Scheme scheme = Scheme::bdf1;
  double dt = 0.01;
  /// Relative to the first residual of the step.
  double newton_tol = 1e-8;
  int newton_max_iter = 25;
  double newton_abs_tol = 1e-14;
  LinearSolverConfig linear;
  StabilizationParams stabilization;

  bool operator==(const SolverConfig&) const = default;
};

/// Throws ConfigError unless dt > 0 and the tolerances lie in (0, 1).
void validate(const SolverConfig& config);

/// Nodal history. Between steps u equals u_n (the last converged total
/// displacement); during a step u holds the iterate u^{n+1}.
struct State {
  Vector u, u_n;
  std::optional<Vector> u_nm1, u_nm2;
  Vector p, p_n;
  /// rho0 / J per element.
  std::vector<double> density;
  /// Element fine-scale displacement of the last converged step (empty at
  /// the start, meaning zero).
  std::vector<Vec3> subscale;
  double t = 0.0;
  int step = 0;
};

/// Stress-free state at rest: u = 0, p = 0, u^{-1} = 0.
State initial_state(const Mesh& mesh, const Material& material);

/// Imposes an initial velocity v0 (and optional initial acceleration a0) by
/// seeding u^{-1} = -v0 dt + a0 dt^2 / 2. Both nodal, num_nodes * dim.
void seed_history(State& state, const Vector& v0, const Vector& a0, double dt);

/// Leading stencil coefficient c0 of the acceleration: 1 (BDF1), 2 (BDF2),
/// 0 for the static schemes.
double bdf_leading_coefficient(Scheme scheme);

/// BDF1 (u - 2u_n + u_nm1)/dt^2 or BDF2 (2u - 5u_n + 4u_nm1 - u_nm2)/dt^2.
/// Throws ConfigError if the required history is missing.
Vector bdf_acceleration(const State& state, double dt, Scheme scheme);

/// Raised when Newton does not reach the tolerance; carries the residual
/// history of the step.
class NewtonDivergence : public NumericalError {
 public:
  NewtonDivergence(const std::string& what, std::vector<double> trace)
      : NumericalError(what), trace_(std::move(trace)) {}
  const std::vector<double>& trace() const { return trace_; }

 private:
  std::vector<double> trace_;
};

struct NewtonResult {
  Vector delta_u;
  Vector delta_p;
  double residual_norm = 0.0;
};

/// One Newton correction for the iterate held in `state` (state.u = u^{n+1},
/// state.p = p^{n+1}) on the configuration of the last converged step.
/// residual_norm is that of the iterate before the correction, over the
/// unconstrained dofs. Constrained dofs receive a zero correction.
NewtonResult newton_step(const Mesh& mesh, const Material& material,
                         const State& state, const SolverConfig& config,
                         const std::vector<BoundaryCondition>& bcs,
                         Scheme scheme, std::span<const double> tau);

struct StepReport {
  Scheme scheme_used = Scheme::bdf1;
  int iterations = 0;
  std::vector<double> residuals;
  double force_scale = 0.0;
  std::vector<std::string> messages;
};

/// Newton loop to convergence, then moves the mesh by the converged increment
/// and rotates the history. On any error both mesh and state are left as they
/// were (MeshInversion, KinematicInversion, NewtonDivergence, solver errors).
StepReport advance_step(Mesh& mesh, const Material& material, State& state,
                        const SolverConfig& config,
                        const std::vector<BoundaryCondition>& bcs);

struct SteadySolution {
  Vector u;
  Vector p;
};

/// Single linear solve of the steady mixed problem on the frozen mesh, with
/// loads and Dirichlet data evaluated at time t.
SteadySolution solve_steady(const Mesh& mesh, const Material& material,
                            const std::vector<BoundaryCondition>& bcs,
                            const SolverConfig& config, double t = 0.0);

}  // namespace vmsolid
