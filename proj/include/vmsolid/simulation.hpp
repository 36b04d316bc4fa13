#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "vmsolid/cases.hpp"
#include "vmsolid/io.hpp"
#include "vmsolid/solver.hpp"

namespace vmsolid {

/// A material point located in the reference configuration.
struct PointLocation {
  std::size_t element = 0;
  std::array<double, 4> barycentric{0.0, 0.0, 0.0, 0.0};
};

/// Finds the element containing `point` in the reference configuration by
/// walking across faces from `start`, with a linear scan as fallback. Points
/// on nodes get a unit barycentric weight. Throws ConfigError when the point
/// lies outside the mesh.
PointLocation locate_point(const Mesh& mesh, const Vec3& point, std::size_t start = 0);

/// P1 interpolation of a nodal field with `components` values per node.
double interpolate(const Mesh& mesh, const PointLocation& loc, const Vector& nodal,
                   int components = 1, int component = 0);

/// Per-element deformation gradient I + grad_X u of the total displacement.
std::vector<Mat3> element_deformation_gradients(const Mesh& mesh, const Vector& u);

/// Nodal Von Mises stress: volume-weighted average of element values.
Vector nodal_von_mises(const Mesh& mesh, const Material& material, const Vector& u);

struct RunOptions {
  /// Output directory; empty disables all file output.
  std::string out_dir;
  bool quiet = false;
  /// Progress and log lines (besides the log file); null for none.
  std::ostream* log = nullptr;
  /// Called after every converged step (and once after a steady solve).
  std::function<void(const Mesh&, const State&, const StepReport&)> on_step;
};

struct RunReport {
  std::string case_name;
  double wall_time = 0.0;
  int steps_completed = 0;
  int steps_planned = 0;
  std::vector<int> newton_iterations;
  std::vector<double> final_residuals;
  std::vector<std::string> output_files;
  std::vector<std::string> log;
  std::string error;
  /// 0 on success, 1 if a step failed.
  int exit_status = 0;
};

struct RunResult {
  RunReport report;
  Mesh mesh;
  State state;
  Material material;
  std::vector<ProbeSeries> probes;
};

/// Runs a validated case: a single solve for the steady scheme, otherwise the
/// time loop to t_end. Configuration errors propagate as ConfigError;
/// numerical failures during stepping end the run with exit_status 1.
RunResult run_case(const CaseConfig& config, const RunOptions& options = {});

/// One-line-per-field text summary of a report.
void print_report(std::ostream& out, const RunReport& report);

}  // namespace vmsolid
