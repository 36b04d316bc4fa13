#include "vmsolid/materials.hpp"

#include <cmath>

#include "vmsolid/error.hpp"

namespace vmsolid {

double Moduli::lambda() const {
  if (incompressible)
    throw ConfigError("lambda is unbounded for an incompressible material");
  return K - 2.0 * mu / 3.0;
}

Moduli compute_moduli(double E, double nu) {
  if (!(E > 0.0)) throw ConfigError("Young's modulus must be positive");
  if (!(nu > -1.0 && nu <= 0.5))
    throw ConfigError("Poisson ratio must satisfy -1 < nu <= 0.5 (got " +
                      std::to_string(nu) + ")");
  Moduli m;
  m.E = E;
  m.nu = nu;
  m.mu = E / (2.0 * (1.0 + nu));
  if (nu == 0.5) {
    m.incompressible = true;
    m.K = 0.0;
  } else {
    m.K = (1.0 / 3.0) * E / (1.0 - 2.0 * nu);
  }
  return m;
}

std::string to_string(MaterialKind kind) {
  switch (kind) {
    case MaterialKind::linear_elastic: return "linear_elastic";
    case MaterialKind::neo_hookean: return "neo_hookean";
    case MaterialKind::st_venant_kirchhoff: return "st_venant_kirchhoff";
  }
  return "unknown";
}

MaterialKind material_kind_from_string(const std::string& s) {
  if (s == "linear_elastic") return MaterialKind::linear_elastic;
  if (s == "neo_hookean") return MaterialKind::neo_hookean;
  if (s == "st_venant_kirchhoff") return MaterialKind::st_venant_kirchhoff;
  throw ConfigError("unknown material kind '" + s + "'");
}

Material make_material(MaterialKind kind, double E, double nu, double rho0) {
  if (!(rho0 > 0.0)) throw ConfigError("density must be positive");
  Material m{kind, compute_moduli(E, nu), rho0};
  if (kind == MaterialKind::st_venant_kirchhoff && m.moduli.incompressible)
    throw ConfigError("St. Venant-Kirchhoff requires nu < 0.5");
  return m;
}

Mat3 deviator(const Mat3& a) {
  return a - (a.trace() / 3.0) * Mat3::Identity();
}

Mat3 linear_dev_stress(const Mat3& grad_u, double mu) {
  const Mat3 eps = 0.5 * (grad_u + grad_u.transpose());
  return 2.0 * mu * deviator(eps);
}

double volumetric_strain(const Mat3& grad_u) { return grad_u.trace(); }

DeformationState updated_lagrangian_F(const Mat3& grad_u_current) {
  const Mat3 A = Mat3::Identity() - grad_u_current;
  const double det = A.determinant();
  if (!(det > 0.0))
    throw KinematicInversion("kinematic inversion: det(I - grad u) = " +
                             std::to_string(det));
  DeformationState s;
  s.F = A.inverse();
  s.J = 1.0 / det;
  return s;
}

Mat3 ffT_incremental(const Mat3& grad_u, const Mat3& grad_delta_u) {
  const DeformationState prev = updated_lagrangian_F(grad_u);
  const Mat3 B = prev.F * prev.F.transpose();
  const Mat3& G = grad_delta_u;
  return B + G * B + B * G.transpose() + G * B * G.transpose();
}

double simo_taylor_energy(double J, double kappa) {
  if (!(J > 0.0)) throw KinematicInversion("Simo-Taylor energy needs J > 0");
  return 0.25 * kappa * (J * J - 1.0) - 0.5 * kappa * std::log(J);
}

double simo_taylor_pressure(double J, double kappa) {
  if (!(J > 0.0)) throw KinematicInversion("Simo-Taylor pressure needs J > 0");
  return 0.5 * kappa * (J - 1.0 / J);
}

Mat3 neo_hookean_dev_stress(const Mat3& FFt, double J, double mu) {
  return mu * std::pow(J, -5.0 / 3.0) * deviator(FFt);
}

StressSplit svk_stress(const Mat3& F, double mu, double lambda) {
  const double J = F.determinant();
  if (!(J > 0.0)) throw KinematicInversion("St. Venant-Kirchhoff needs det F > 0");
  const Mat3 E = 0.5 * (F.transpose() * F - Mat3::Identity());
  const Mat3 S = lambda * E.trace() * Mat3::Identity() + 2.0 * mu * E;
  StressSplit out;
  out.cauchy = F * S * F.transpose() / J;
  out.pressure = out.cauchy.trace() / 3.0;
  out.deviatoric = out.cauchy - out.pressure * Mat3::Identity();
  return out;
}

double update_density(double rho0, double J) {
  if (!(J > 0.0)) throw KinematicInversion("density update needs J > 0");
  return rho0 / J;
}

Mat3 deviatoric_stress(const Material& m, const Mat3& F) {
  switch (m.kind) {
    case MaterialKind::linear_elastic:
      return linear_dev_stress(F - Mat3::Identity(), m.moduli.mu);
    case MaterialKind::neo_hookean: {
      const double J = F.determinant();
      if (!(J > 0.0)) throw KinematicInversion("kinematic inversion: det F <= 0");
      return neo_hookean_dev_stress(F * F.transpose(), J, m.moduli.mu);
    }
    case MaterialKind::st_venant_kirchhoff:
      return svk_stress(F, m.moduli.mu, m.moduli.lambda()).deviatoric;
  }
  return Mat3::Zero();
}

Mat3 deviatoric_stress_derivative(const Material& m, const Mat3& F,
                                  const Mat3& dF) {
  const double mu = m.moduli.mu;
  switch (m.kind) {
    case MaterialKind::linear_elastic:
      return linear_dev_stress(dF, mu);
    case MaterialKind::neo_hookean: {
      const double J = F.determinant();
      if (!(J > 0.0)) throw KinematicInversion("kinematic inversion: det F <= 0");
      const Mat3 B = F * F.transpose();
      const Mat3 dB = dF * F.transpose() + F * dF.transpose();
      // d(J^-5/3) = -5/3 J^-5/3 tr(F^-1 dF)
      const double dlogJ = (F.inverse() * dF).trace();
      const double Jp = std::pow(J, -5.0 / 3.0);
      return mu * Jp * (deviator(dB) - (5.0 / 3.0) * dlogJ * deviator(B));
    }
    case MaterialKind::st_venant_kirchhoff: {
      const double lambda = m.moduli.lambda();
      const double J = F.determinant();
      if (!(J > 0.0)) throw KinematicInversion("kinematic inversion: det F <= 0");
      const Mat3 E = 0.5 * (F.transpose() * F - Mat3::Identity());
      const Mat3 S = lambda * E.trace() * Mat3::Identity() + 2.0 * mu * E;
      const Mat3 dE = 0.5 * (F.transpose() * dF + dF.transpose() * F);
      const Mat3 dS = lambda * dE.trace() * Mat3::Identity() + 2.0 * mu * dE;
      const Mat3 sigma = F * S * F.transpose() / J;
      const double dlogJ = (F.inverse() * dF).trace();
      const Mat3 dsigma = -dlogJ * sigma + (dF * S * F.transpose() +
                                            F * dS * F.transpose() +
                                            F * S * dF.transpose()) / J;
      return deviator(dsigma);
    }
  }
  return Mat3::Zero();
}

double constitutive_pressure(const Material& m, const Mat3& F) {
  switch (m.kind) {
    case MaterialKind::linear_elastic:
      if (m.moduli.incompressible)
        throw ConfigError("constitutive pressure undefined for nu = 0.5");
      return m.moduli.K * (F - Mat3::Identity()).trace();
    case MaterialKind::neo_hookean:
      if (m.moduli.incompressible)
        throw ConfigError("constitutive pressure undefined for nu = 0.5");
      return simo_taylor_pressure(F.determinant(), m.moduli.K);
    case MaterialKind::st_venant_kirchhoff:
      return svk_stress(F, m.moduli.mu, m.moduli.lambda()).pressure;
  }
  return 0.0;
}

}  // namespace vmsolid
