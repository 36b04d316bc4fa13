#pragma once

#include <array>
#include <string>
#include <vector>

#include "vmsolid/fem.hpp"
#include "vmsolid/materials.hpp"
#include "vmsolid/mesh.hpp"
#include "vmsolid/solver.hpp"

namespace vmsolid {

using Triple = std::array<double, 3>;

struct GeometryConfig {
  /// "cook", "box" or "file".
  std::string kind = "cook";
  // cook
  int n = 16;
  double scale = 1.0;
  // box
  int dim = 3;
  Triple extents{1.0, 1.0, 1.0};
  std::array<int, 3> subdivisions{1, 1, 1};
  Triple origin{0.0, 0.0, 0.0};
  Triple rotation_axis{0.0, 0.0, 1.0};
  double rotation_deg = 0.0;
  /// Relative to origin.
  Triple rotation_center{0.0, 0.0, 0.0};
  // file
  std::string file;

  bool operator==(const GeometryConfig&) const = default;
};

struct MaterialConfig {
  MaterialKind kind = MaterialKind::linear_elastic;
  double E = 1.0;
  double nu = 0.3;
  double rho0 = 1.0;

  bool operator==(const MaterialConfig&) const = default;
};

/// One entry of the bc section. `type` is one of dirichlet, traction,
/// body_force, gravity (body force per unit mass) or initial_velocity.
/// An initial velocity is v_i(x) = value_i + gradient[i] . (x - center).
struct BCConfig {
  std::string name;
  std::string type = "dirichlet";
  std::string tag;
  Triple value{0.0, 0.0, 0.0};
  std::array<bool, 3> components{true, true, true};
  /// constant, ramp or cosine.
  std::string time = "constant";
  double duration = 1.0;
  double omega = 0.0;
  std::array<Triple, 3> gradient{};
  Triple center{0.0, 0.0, 0.0};

  bool operator==(const BCConfig&) const = default;
};

enum class ProbeField { u_x, u_y, u_z, p, von_mises };

std::string to_string(ProbeField field);
ProbeField probe_field_from_string(const std::string& s);

struct ProbeConfig {
  std::string name;
  Triple point{0.0, 0.0, 0.0};
  ProbeField field = ProbeField::u_y;

  bool operator==(const ProbeConfig&) const = default;
};

struct OutputConfig {
  /// Write a VTK snapshot every this many steps; 0 writes only the final one.
  int vtk_every = 0;
  std::vector<ProbeConfig> probes;

  bool operator==(const OutputConfig&) const = default;
};

struct CaseConfig {
  std::string name;
  /// Preset the case was expanded from, empty otherwise.
  std::string preset;
  GeometryConfig geometry;
  MaterialConfig material;
  std::vector<BCConfig> bcs;
  double t_end = 1.0;
  SolverConfig solver;
  OutputConfig output;

  bool operator==(const CaseConfig&) const = default;
};

std::vector<std::string> preset_names();

/// Built-in benchmark definitions. Throws ConfigError for unknown names.
CaseConfig preset(const std::string& name);

/// Parses the line-oriented `section.key = value` case format. `case.preset`
/// (anywhere in the file) seeds the configuration; every other line then
/// overrides it. Unknown keys and malformed values throw ConfigError naming
/// the line. The result is validated.
CaseConfig parse_case(const std::string& text);
CaseConfig parse_case_file(const std::string& path);

/// Applies one `key=value` override (the CLI's --set).
void apply_override(CaseConfig& config, const std::string& assignment);

/// Writes every key, so that parse_case(serialize_case(c)) == c.
std::string serialize_case(const CaseConfig& config);

/// Range and consistency checks that do not need the mesh. Throws ConfigError.
void validate(const CaseConfig& config);

Mesh build_mesh(const CaseConfig& config);
Material build_material(const CaseConfig& config);
/// Dirichlet, traction and body-force entries (initial velocities excluded).
std::vector<BoundaryCondition> build_boundary_conditions(const CaseConfig& config);
/// Sum of the initial_velocity entries evaluated at the current node
/// positions (num_nodes * dim). Zero when there are none.
Vector initial_velocity(const CaseConfig& config, const Mesh& mesh);
bool has_initial_velocity(const CaseConfig& config);

}  // namespace vmsolid
