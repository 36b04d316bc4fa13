#pragma once

#include <array>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "vmsolid/materials.hpp"
#include "vmsolid/mesh.hpp"
#include "vmsolid/types.hpp"
#include "vmsolid/vms.hpp"

namespace vmsolid {

/// Displacement dofs first (node * dim + axis), then one pressure dof per node.
class DofMap {
 public:
  DofMap(std::size_t num_nodes, int dim) : num_nodes_(num_nodes), dim_(dim) {}
  explicit DofMap(const Mesh& mesh) : DofMap(mesh.num_nodes(), mesh.dim()) {}

  int displacement(std::size_t node, int axis) const {
    return static_cast<int>(node) * dim_ + axis;
  }
  int pressure(std::size_t node) const {
    return static_cast<int>(num_nodes_ * dim_ + node);
  }
  std::size_t num_nodes() const { return num_nodes_; }
  int dim() const { return dim_; }
  std::size_t num_displacement_dofs() const { return num_nodes_ * dim_; }
  std::size_t total_dofs() const { return num_nodes_ * (dim_ + 1); }

 private:
  std::size_t num_nodes_;
  int dim_;
};

struct LinearSystem {
  SparseMatrix matrix;
  Vector rhs;
  /// Constrained dof -> prescribed value.
  std::map<int, double> dirichlet;
};

/// Scalar time modulation of a boundary condition or load.
struct TimeFunction {
  enum class Kind { constant, ramp, cosine };
  Kind kind = Kind::constant;
  /// ramp: linear from 0 at t = 0 to 1 at t = duration, then 1.
  double duration = 1.0;
  /// cosine: cos(omega t).
  double omega = 0.0;

  double operator()(double t) const;
  bool operator==(const TimeFunction&) const = default;
};

struct DirichletBC {
  std::string tag;
  Vec3 value = Vec3::Zero();
  std::array<bool, 3> components{true, true, true};
  TimeFunction time;
};

/// Surface traction t (stress units) on facets with `tag`.
struct TractionBC {
  std::string tag;
  Vec3 value = Vec3::Zero();
  TimeFunction time;
};

/// Volumetric force f. With per_unit_mass, `value` is an acceleration g and
/// f = rho g. A non-empty `field` gives a spatially varying force density
/// f(x) instead (integrated with a degree-2 rule, scaled by `time`).
struct BodyForceBC {
  Vec3 value = Vec3::Zero();
  bool per_unit_mass = false;
  TimeFunction time;
  std::function<Vec3(const Vec3&)> field;
};

using BoundaryCondition = std::variant<DirichletBC, TractionBC, BodyForceBC>;

/// Throws ConfigError for unknown tags and for a tag that is both Dirichlet
/// and traction on the same axis.
void check_boundary_conditions(const Mesh& mesh,
                               const std::vector<BoundaryCondition>& bcs);

/// Prescribed displacement values at time t. Conflicting prescriptions on the
/// same dof throw ConfigError.
std::map<int, double> dirichlet_values(const Mesh& mesh,
                                       const std::vector<BoundaryCondition>& bcs,
                                       double t);

/// Consistent P1 load of a constant traction on facets with `tag`, as a nodal
/// vector of length num_nodes * dim. Throws ConfigError for unknown tags.
Vector integrate_traction(const Mesh& mesh, const std::string& tag, const Vec3& t);

/// All traction and body-force loads at time t (nodal, length num_nodes*dim).
Vector external_load(const Mesh& mesh, const Material& material,
                     const std::vector<BoundaryCondition>& bcs, double t);

/// Steady linear-elastic mixed system on the mesh as it is:
///   a(u,v) + (p, div v)                              = L(v)
///   (div u, q) - (1/K)(p, q) - sum tau (grad p, grad q) = sum tau (f, grad q)
/// Loads and Dirichlet targets are evaluated at time t. Dirichlet targets are
/// recorded but not applied.
LinearSystem assemble_steady_linear(const Mesh& mesh, const Material& material,
                                    const std::vector<BoundaryCondition>& bcs,
                                    std::span<const double> tau, double t = 0.0);

/// Row replacement with column elimination: constrained rows become identity
/// rows with rhs equal to the target, known values move to the rhs.
LinearSystem apply_dirichlet(LinearSystem system);

/// Deviatoric internal force of one element on the configuration described by
/// `geometry` (gradients of the current configuration), for the increment
/// delta_u applied on top of the deformation F_prev:
///   F = (I + grad delta_u) F_prev,  f_a = V sigma_dev(F) grad N_a.
/// With include_volumetric the constitutive pressure (Simo-Taylor U'(J) for
/// Neo-Hookean) is added to the stress. `tangent` is d force / d delta_u.
struct ElementForce {
  Vector force;
  Matrix tangent;
  Mat3 F = Mat3::Identity();
};

ElementForce element_internal_force(const ElementGeometry& geometry, int dim,
                                    const Mat3& F_prev,
                                    std::span<const Vec3> delta_u,
                                    const Material& material,
                                    bool include_volumetric = false);

/// Current Newton iterate of a moving-mesh step, on the configuration of the
/// last converged step.
struct TransientFields {
  /// u^{n+1} - u^n, nodal (num_nodes * dim).
  const Vector& delta_u;
  /// p^{n+1} and p^n, nodal.
  const Vector& pressure;
  const Vector& pressure_prev;
  /// BDF acceleration at the iterate (num_nodes * dim). Ignored when
  /// acceleration_coefficient is zero.
  const Vector& acceleration;
  /// d acceleration / d delta_u (c0 / dt^2); zero for quasi-static steps.
  double acceleration_coefficient;
  /// t^{n+1}, used for loads.
  double time;
  /// Element fine-scale displacement u' = tau (grad p + f - rho a) of the last
  /// converged step; empty means zero.
  std::span<const Vec3> subscale_prev = {};
};

struct TransientSystem {
  /// Newton tangent and rhs = -residual. Dirichlet targets are left to the
  /// caller.
  LinearSystem system;
  Vector residual;
  /// Norm of the element-wise absolute residual contributions.
  double force_scale = 0.0;
  /// Element fine-scale displacement at the iterate.
  std::vector<Vec3> subscale;
};

/// Newton linearization of the stabilized moving-mesh mixed system:
///   (rho a, w) + (dev sigma, grad^s w) + (p, div w)
///     + sum tau (div du - (p - p^n)/K, div w) - L(w) = 0
///   (div du, q) - (1/K)(p - p^n, q) - sum (u' - u'^n, grad q) = 0
/// with the fine-scale displacement u' = tau (grad p + f - rho a). Only the
/// increment of u' enters the incremental volume balance, so the
/// stabilization does not accumulate a volume drift over the steps.
TransientSystem assemble_transient(const Mesh& mesh, const Material& material,
                                   const TransientFields& fields,
                                   const std::vector<BoundaryCondition>& bcs,
                                   std::span<const double> tau);

/// Gradient of a nodal P1 vector field (num_nodes * dim) on element e.
Mat3 element_gradient(const ElementGeometry& geometry, const Mesh& mesh,
                      std::size_t e, const Vector& nodal);

/// Barycentric quadrature on a simplex: points as barycentric coordinates,
/// weights summing to 1 (multiply by the element volume).
struct QuadratureRule {
  std::vector<std::array<double, 4>> points;
  std::vector<double> weights;
};

/// Exact rules: degree 1 and 2 in 2D/3D, degree 5 in 2D.
QuadratureRule simplex_quadrature(int dim, int degree);

}  // namespace vmsolid
