#include "vmsolid/cases.hpp"

#include <cmath>

#include "vmsolid/error.hpp"

namespace vmsolid {

namespace {

Vec3 vec(const Triple& t) { return {t[0], t[1], t[2]}; }

BCConfig clamp(const std::string& name, const std::string& tag) {
  BCConfig bc;
  bc.name = name;
  bc.type = "dirichlet";
  bc.tag = tag;
  return bc;
}

ProbeConfig probe(const std::string& name, Triple point, ProbeField field) {
  return {name, point, field};
}

CaseConfig cook(const std::string& name, double scale) {
  CaseConfig c;
  c.name = name;
  c.preset = name;
  c.geometry.kind = "cook";
  c.geometry.n = 16;
  c.geometry.scale = scale;
  c.material = {MaterialKind::linear_elastic, 250.0, 0.49995, 1.0};
  c.bcs.push_back(clamp("clamp", "left"));
  BCConfig load;
  load.name = "load";
  load.type = "traction";
  load.tag = "right";
  load.value = {0.0, 6.25, 0.0};
  c.bcs.push_back(load);
  c.output.probes.push_back(probe("tip_a", {48.0 * scale, 60.0 * scale, 0.0}, ProbeField::u_y));
  return c;
}

CaseConfig csm(const std::string& name, double mu, Scheme scheme, double dt,
               double t_end) {
  const double nu = 0.4;
  CaseConfig c;
  c.name = name;
  c.preset = name;
  c.geometry.kind = "box";
  c.geometry.dim = 2;
  c.geometry.extents = {0.35, 0.02, 0.0};
  c.geometry.subdivisions = {35, 4, 1};
  c.geometry.origin = {0.25, 0.19, 0.0};
  c.material = {MaterialKind::st_venant_kirchhoff, 2.0 * mu * (1.0 + nu), nu, 1000.0};
  c.bcs.push_back(clamp("clamp", "xmin"));
  BCConfig g;
  g.name = "gravity";
  g.type = "gravity";
  g.value = {0.0, -2.0, 0.0};
  c.bcs.push_back(g);
  c.solver.scheme = scheme;
  c.solver.dt = dt;
  c.t_end = t_end;
  c.output.probes.push_back(probe("tip", {0.6, 0.2, 0.0}, ProbeField::u_y));
  return c;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"cook_static", "cook_transient", "upsetting", "csm1",
          "csm2",        "csm3",           "bending_beam_3d"};
}

CaseConfig preset(const std::string& name) {
  if (name == "cook_static") {
    CaseConfig c = cook(name, 1.0);
    c.solver.scheme = Scheme::steady;
    c.solver.dt = 1.0;
    c.t_end = 0.0;
    return c;
  }
  if (name == "cook_transient") {
    CaseConfig c = cook(name, 0.1);
    c.solver.scheme = Scheme::bdf2;
    c.solver.dt = 0.01;
    c.solver.stabilization.model = TauModel::dynamic_model;
    c.t_end = 7.0;
    c.output.vtk_every = 100;
    return c;
  }
  if (name == "upsetting") {
    CaseConfig c;
    c.name = c.preset = name;
    c.geometry.kind = "box";
    c.geometry.dim = 3;
    c.geometry.extents = {14.0, 14.0, 10.0};
    c.geometry.subdivisions = {4, 4, 3};
    c.material = {MaterialKind::linear_elastic, 2.0e5, 0.4999, 1.0};
    c.bcs.push_back(clamp("bottom", "zmin"));
    BCConfig plate = clamp("plate", "zmax");
    plate.value = {0.0, 0.0, -0.7};
    plate.time = "ramp";
    plate.duration = 1.0;
    c.bcs.push_back(plate);
    c.solver.scheme = Scheme::quasistatic;
    c.solver.dt = 0.1;
    c.t_end = 1.0;
    c.output.probes.push_back(probe("center_p", {7.0, 7.0, 5.0}, ProbeField::p));
    return c;
  }
  if (name == "csm1") return csm(name, 5.0e5, Scheme::bdf1, 0.05, 20.0);
  if (name == "csm2") return csm(name, 2.0e6, Scheme::bdf1, 0.05, 20.0);
  if (name == "csm3") return csm(name, 5.0e5, Scheme::bdf2, 0.01, 12.0);
  if (name == "bending_beam_3d") {
    CaseConfig c;
    c.name = c.preset = name;
    c.geometry.kind = "box";
    c.geometry.dim = 3;
    c.geometry.extents = {1.0, 6.0, 1.0};
    c.geometry.subdivisions = {2, 12, 2};
    c.geometry.origin = {-0.5, 0.0, -0.5};
    c.geometry.rotation_axis = {0.0, 1.0, 0.0};
    c.geometry.rotation_deg = 5.2;
    c.geometry.rotation_center = {0.5, 0.0, 0.5};
    c.material = {MaterialKind::neo_hookean, 1.7e7, 0.499, 1.1e3};
    c.bcs.push_back(clamp("clamp", "ymin"));
    BCConfig v0;
    v0.name = "v0";
    v0.type = "initial_velocity";
    v0.gradient[0] = {0.0, 5.0 / 3.0, 0.0};
    c.bcs.push_back(v0);
    c.solver.scheme = Scheme::bdf2;
    c.solver.dt = 0.01;
    c.solver.stabilization.model = TauModel::dynamic_model;
    c.t_end = 2.0;
    c.output.vtk_every = 20;
    c.output.probes.push_back(probe("tip", {0.0, 6.0, 0.0}, ProbeField::u_x));
    return c;
  }
  throw ConfigError("unknown preset '" + name + "'");
}

std::string to_string(ProbeField field) {
  switch (field) {
    case ProbeField::u_x: return "u_x";
    case ProbeField::u_y: return "u_y";
    case ProbeField::u_z: return "u_z";
    case ProbeField::p: return "p";
    case ProbeField::von_mises: return "von_mises";
  }
  return "unknown";
}

ProbeField probe_field_from_string(const std::string& s) {
  if (s == "u_x") return ProbeField::u_x;
  if (s == "u_y") return ProbeField::u_y;
  if (s == "u_z") return ProbeField::u_z;
  if (s == "p") return ProbeField::p;
  if (s == "von_mises") return ProbeField::von_mises;
  throw ConfigError("unknown probe field '" + s + "'");
}

void validate(const CaseConfig& c) {
  const auto& g = c.geometry;
  if (g.kind == "cook") {
    if (g.n < 1) throw ConfigError("geometry.n must be >= 1");
    if (!(g.scale > 0.0)) throw ConfigError("geometry.scale must be positive");
  } else if (g.kind == "box") {
    if (g.dim != 2 && g.dim != 3) throw ConfigError("geometry.dim must be 2 or 3");
    for (int i = 0; i < g.dim; ++i)
      if (!(g.extents[i] > 0.0) || g.subdivisions[i] < 1)
        throw ConfigError("geometry.extents and geometry.subdivisions must be positive");
  } else if (g.kind == "file") {
    if (g.file.empty()) throw ConfigError("geometry.file is empty");
  } else {
    throw ConfigError("unknown geometry.kind '" + g.kind + "'");
  }
  build_material(c);
  validate(c.solver);
  if (c.solver.scheme == Scheme::steady) {
    if (c.material.kind != MaterialKind::linear_elastic)
      throw ConfigError("time.scheme = steady requires material.kind = linear_elastic");
  } else if (!(c.t_end >= c.solver.dt)) {
    throw ConfigError("time.t_end must be at least time.dt");
  }
  for (const auto& bc : c.bcs) {
    if (bc.name.empty()) throw ConfigError("boundary condition without a name");
    const bool tagged = bc.type == "dirichlet" || bc.type == "traction";
    if (!tagged && bc.type != "body_force" && bc.type != "gravity" &&
        bc.type != "initial_velocity")
      throw ConfigError("bc." + bc.name + ": unknown type '" + bc.type + "'");
    if (tagged && bc.tag.empty()) throw ConfigError("bc." + bc.name + ": missing tag");
    if (bc.time != "constant" && bc.time != "ramp" && bc.time != "cosine")
      throw ConfigError("bc." + bc.name + ": unknown time function '" + bc.time + "'");
    if (bc.time == "ramp" && !(bc.duration > 0.0))
      throw ConfigError("bc." + bc.name + ": ramp duration must be positive");
  }
  for (const auto& p : c.output.probes)
    if (p.name.empty()) throw ConfigError("probe without a name");
  if (c.output.vtk_every < 0) throw ConfigError("output.vtk_every must be >= 0");
}

Mesh build_mesh(const CaseConfig& c) {
  const auto& g = c.geometry;
  if (g.kind == "cook") return generate_cook_mesh(g.n, g.scale);
  if (g.kind == "file") return read_gmsh_file(g.file);
  BoxSpec spec;
  spec.dim = g.dim;
  spec.extents = vec(g.extents);
  spec.subdivisions = g.subdivisions;
  spec.origin = vec(g.origin);
  spec.rotation_axis = vec(g.rotation_axis);
  spec.rotation_deg = g.rotation_deg;
  spec.rotation_center = vec(g.rotation_center);
  return generate_box_mesh(spec);
}

Material build_material(const CaseConfig& c) {
  return make_material(c.material.kind, c.material.E, c.material.nu, c.material.rho0);
}

namespace {

TimeFunction time_function(const BCConfig& bc) {
  TimeFunction f;
  if (bc.time == "ramp") f.kind = TimeFunction::Kind::ramp;
  else if (bc.time == "cosine") f.kind = TimeFunction::Kind::cosine;
  f.duration = bc.duration;
  f.omega = bc.omega;
  return f;
}

}  // namespace

std::vector<BoundaryCondition> build_boundary_conditions(const CaseConfig& c) {
  std::vector<BoundaryCondition> out;
  for (const auto& bc : c.bcs) {
    if (bc.type == "dirichlet")
      out.push_back(DirichletBC{bc.tag, vec(bc.value), bc.components, time_function(bc)});
    else if (bc.type == "traction")
      out.push_back(TractionBC{bc.tag, vec(bc.value), time_function(bc)});
    else if (bc.type == "body_force")
      out.push_back(BodyForceBC{vec(bc.value), false, time_function(bc), {}});
    else if (bc.type == "gravity")
      out.push_back(BodyForceBC{vec(bc.value), true, time_function(bc), {}});
  }
  return out;
}

bool has_initial_velocity(const CaseConfig& c) {
  for (const auto& bc : c.bcs)
    if (bc.type == "initial_velocity") return true;
  return false;
}

Vector initial_velocity(const CaseConfig& c, const Mesh& mesh) {
  const int dim = mesh.dim();
  Vector v = Vector::Zero(static_cast<Eigen::Index>(mesh.num_nodes() * dim));
  for (const auto& bc : c.bcs) {
    if (bc.type != "initial_velocity") continue;
    const Vec3 center = vec(bc.center);
    for (std::size_t a = 0; a < mesh.num_nodes(); ++a) {
      const Vec3 x = mesh.nodes_current()[a] - center;
      for (int i = 0; i < dim; ++i)
        v(static_cast<Eigen::Index>(a) * dim + i) += bc.value[i] + vec(bc.gradient[i]).dot(x);
    }
  }
  return v;
}

}  // namespace vmsolid
