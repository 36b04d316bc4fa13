#pragma once

#include <functional>
#include <string>
#include <vector>

#include "vmsolid/cases.hpp"
#include "vmsolid/simulation.hpp"

namespace vmsolid {

/// Outcome of one acceptance check.
struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  /// Measured quantities, one "key = value" item per entry.
  std::vector<std::string> details;
  double seconds = 0.0;
};

/// Oscillation of a sampled signal split into periods at upward crossings of
/// the midline (max + min) / 2 of the signal, with a hysteresis band of 10 % of
/// the half range.
struct OscillationPeriod {
  double t_begin = 0.0;
  double t_end = 0.0;
  /// Time average (trapezoidal) over the period.
  double mean = 0.0;
  /// (max - min) / 2 within the period.
  double amplitude = 0.0;
};

std::vector<OscillationPeriod> split_periods(const std::vector<double>& t,
                                             const std::vector<double>& v);

/// Tip value of a steady run of `config` (first probe).
double steady_probe_value(const CaseConfig& config);

/// ||div u||_L2 / ||grad u||_L2 over the mesh (element-constant P1 gradients).
double divergence_ratio(const Mesh& mesh, const Vector& u);

/// Mesh with interior nodes displaced by up to `fraction` of the local cell
/// size (deterministic seed).
Mesh perturb_interior(const Mesh& mesh, double fraction, unsigned seed);

/// Steady patch test with u = A x + b prescribed on the boundary. Returns the
/// max nodal error relative to max |u|.
double patch_test_error(const Mesh& mesh, const Mat3& A, const Vec3& b, double nu);

struct MmsErrors {
  double h = 0.0;
  double u_l2 = 0.0;
  double p_l2 = 0.0;
};

/// Manufactured-solution errors of the 2D steady linear problem on an n x n
/// unit-square mesh.
MmsErrors manufactured_solution_errors(int n, double nu);

/// End-time error of the uniform-body-acceleration oracle
/// g(t) = g0 cos(omega t) for the given scheme and number of steps.
double bdf_oracle_error(Scheme scheme, int steps);

/// Max-entry relative difference between the analytic element tangent of a
/// Neo-Hookean/Simo-Taylor tetrahedron and central differences, for a random
/// state with total J in [j_min, j_max].
double tangent_fd_error(unsigned seed, double j_min, double j_max, double* J_out = nullptr);

/// Least-squares slope of log(error) against log(h).
double observed_order(const std::vector<double>& h, const std::vector<double>& err);

// Acceptance checks, numbered as in the README.
CriterionResult check_cook_convergence();
CriterionResult check_checkerboard();
CriterionResult check_incompressible();
CriterionResult check_transient_cook();
CriterionResult check_patch_test();
CriterionResult check_manufactured_solution();
CriterionResult check_bdf_orders();
CriterionResult check_tangent();
CriterionResult check_csm3();
CriterionResult check_bending_beam();
CriterionResult check_upsetting();

struct CriterionEntry {
  int id;
  std::string name;
  std::function<CriterionResult()> run;
};

std::vector<CriterionEntry> acceptance_criteria();

}  // namespace vmsolid
