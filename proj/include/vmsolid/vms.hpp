#pragma once

#include <string>
#include <vector>

#include "vmsolid/materials.hpp"
#include "vmsolid/mesh.hpp"

namespace vmsolid {

enum class TauModel { static_model, dynamic_model };

std::string to_string(TauModel model);
TauModel tau_model_from_string(const std::string& s);

struct StabilizationParams {
  double alpha = 1.0;
  TauModel model = TauModel::static_model;
  /// false assembles the plain Galerkin system (all tau = 0).
  bool enabled = true;

  bool operator==(const StabilizationParams&) const = default;
};

/// Element stabilization parameter.
///   static:  tau = alpha h^2 / (2 mu)
///   dynamic: tau = (rho / dt^2 + 2 mu / (alpha h^2))^-1
/// Throws ConfigError for non-positive h, mu, alpha (and rho, dt when dynamic).
double compute_tau(double h, double mu, double rho, double dt, TauModel model,
                   double alpha = 1.0);

/// tau_K for every element of the mesh in its current configuration, with the
/// element density rho0 / J. All zeros when stabilization is disabled.
std::vector<double> compute_tau_field(const Mesh& mesh, const Material& material,
                                      double dt, const StabilizationParams& params);

/// Element-level fine-scale contributions for equal-order P1 elements with
/// identity projectors. All blocks are returned with a positive sign, as the
/// bilinear forms they represent; the assembler decides how they enter the
/// residual. Local displacement dofs are ordered node-major (a*dim + i).
struct FineScaleTerms {
  /// tau (grad p_b, grad q_a)
  Matrix pressure_laplacian;
  /// tau (r, grad q_a) for the element-constant residual force r = f - rho a.
  Vector force_projection;
  /// tau (div u_b, div w_a); only with include_divergence_terms.
  Matrix divergence_penalty;
  /// (tau / K) (p_b, div w_a); only with include_divergence_terms.
  Matrix pressure_divergence;
};

FineScaleTerms fine_scale_pressure_terms(const ElementGeometry& geometry, int dim,
                                         double tau, const Vec3& residual_force,
                                         double inverse_bulk,
                                         bool include_divergence_terms);

}  // namespace vmsolid
