#pragma once

#include <string>

#include "vmsolid/types.hpp"

namespace vmsolid {

/// Isotropic elastic moduli derived from (E, nu).
struct Moduli {
  double E = 0.0;
  double nu = 0.0;
  double mu = 0.0;
  /// Bulk modulus; meaningless when `incompressible` is set.
  double K = 0.0;
  bool incompressible = false;

  /// 1/K, exactly zero for nu = 0.5.
  double inverse_bulk() const { return incompressible ? 0.0 : 1.0 / K; }
  /// Lame lambda = K - 2 mu / 3. Throws ConfigError when incompressible.
  double lambda() const;
};

/// Throws ConfigError unless E > 0 and -1 < nu <= 0.5.
Moduli compute_moduli(double E, double nu);

enum class MaterialKind { linear_elastic, neo_hookean, st_venant_kirchhoff };

std::string to_string(MaterialKind kind);
MaterialKind material_kind_from_string(const std::string& s);

struct Material {
  MaterialKind kind = MaterialKind::linear_elastic;
  Moduli moduli;
  double rho0 = 1.0;
};

Material make_material(MaterialKind kind, double E, double nu, double rho0);

// All tensors are 3x3. Two-dimensional problems use the plane-strain
// embedding: zero third row/column in displacement gradients and F(2,2) = 1.

/// A - tr(A)/3 I.
Mat3 deviator(const Mat3& a);

/// 2 mu dev[sym(grad_u)].
Mat3 linear_dev_stress(const Mat3& grad_u, double mu);

/// tr(grad_u).
double volumetric_strain(const Mat3& grad_u);

struct DeformationState {
  Mat3 F = Mat3::Identity();
  double J = 1.0;
};

/// F = (I - grad u)^-1 from the current-frame displacement gradient.
/// Throws KinematicInversion when det(I - grad u) <= 0.
DeformationState updated_lagrangian_F(const Mat3& grad_u_current);

/// Left Cauchy-Green tensor after an increment: with B = F F^T from
/// (I - grad u)^-1, returns (I + grad du) B (I + grad du)^T. At grad u = 0
/// this is I + 2 eps(du) + grad du grad du^T.
Mat3 ffT_incremental(const Mat3& grad_u, const Mat3& grad_delta_u);

/// Simo-Taylor volumetric energy U(J) = kappa/4 (J^2 - 1) - kappa/2 ln J.
double simo_taylor_energy(double J, double kappa);

/// U'(J) = kappa/2 (J - 1/J). Throws KinematicInversion for J <= 0.
double simo_taylor_pressure(double J, double kappa);

/// mu J^(-5/3) dev[F F^T].
Mat3 neo_hookean_dev_stress(const Mat3& FFt, double J, double mu);

struct StressSplit {
  Mat3 cauchy = Mat3::Zero();
  double pressure = 0.0;
  Mat3 deviatoric = Mat3::Zero();
};

/// St. Venant-Kirchhoff: S = lambda tr(E) I + 2 mu E, E = (F^T F - I)/2,
/// sigma = J^-1 F S F^T, split into (tr sigma / 3) I + dev sigma.
StressSplit svk_stress(const Mat3& F, double mu, double lambda);

/// rho0 / J.
double update_density(double rho0, double J);

/// Deviatoric Cauchy stress of `material` at the total deformation gradient F.
Mat3 deviatoric_stress(const Material& material, const Mat3& F);

/// Directional derivative of deviatoric_stress at F along dF.
Mat3 deviatoric_stress_derivative(const Material& material, const Mat3& F,
                                  const Mat3& dF);

/// Constitutive (post-processing) pressure at F: K tr(F - I) for the linear
/// law, U'(J) for Neo-Hookean/Simo-Taylor, tr(sigma)/3 for SVK.
double constitutive_pressure(const Material& material, const Mat3& F);

}  // namespace vmsolid
