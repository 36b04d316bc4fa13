#include "vmsolid/vms.hpp"

#include "vmsolid/error.hpp"

namespace vmsolid {

std::string to_string(TauModel model) {
  return model == TauModel::static_model ? "static" : "dynamic";
}

TauModel tau_model_from_string(const std::string& s) {
  if (s == "static") return TauModel::static_model;
  if (s == "dynamic") return TauModel::dynamic_model;
  throw ConfigError("unknown stabilization model '" + s + "'");
}

double compute_tau(double h, double mu, double rho, double dt, TauModel model,
                   double alpha) {
  if (!(h > 0.0) || !(mu > 0.0) || !(alpha > 0.0))
    throw ConfigError("compute_tau: h, mu and alpha must be positive");
  const double elastic = alpha * h * h / (2.0 * mu);
  if (model == TauModel::static_model) return elastic;
  if (!(rho > 0.0) || !(dt > 0.0))
    throw ConfigError("compute_tau: dynamic model needs rho > 0 and dt > 0");
  return 1.0 / (rho / (dt * dt) + 1.0 / elastic);
}

std::vector<double> compute_tau_field(const Mesh& mesh, const Material& material,
                                      double dt, const StabilizationParams& params) {
  std::vector<double> tau(mesh.num_elements(), 0.0);
  if (!params.enabled) return tau;
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const ElementGeometry g = element_geometry(mesh, e);
    const double rho = material.rho0 / jacobian_to_reference(mesh, e);
    tau[e] = compute_tau(g.h, material.moduli.mu, rho, dt, params.model,
                         params.alpha);
  }
  return tau;
}

FineScaleTerms fine_scale_pressure_terms(const ElementGeometry& g, int dim,
                                         double tau, const Vec3& residual_force,
                                         double inverse_bulk,
                                         bool include_divergence_terms) {
  const int nn = dim + 1;
  const int nu = nn * dim;
  const double V = g.volume;
  FineScaleTerms t;
  t.pressure_laplacian = Matrix::Zero(nn, nn);
  t.force_projection = Vector::Zero(nn);
  t.divergence_penalty = Matrix::Zero(nu, nu);
  t.pressure_divergence = Matrix::Zero(nu, nn);
  if (tau == 0.0) return t;

  for (int a = 0; a < nn; ++a) {
    const Vec3 ga = g.gradients.col(a);
    t.force_projection(a) = tau * V * ga.dot(residual_force);
    for (int b = 0; b < nn; ++b)
      t.pressure_laplacian(a, b) = tau * V * ga.dot(g.gradients.col(b));
  }
  if (!include_divergence_terms) return t;

  for (int a = 0; a < nn; ++a)
    for (int i = 0; i < dim; ++i) {
      const double gai = g.gradients(i, a);
      for (int b = 0; b < nn; ++b) {
        for (int k = 0; k < dim; ++k)
          t.divergence_penalty(a * dim + i, b * dim + k) =
              tau * V * gai * g.gradients(k, b);
        // p is linear, div w constant: integral of p_b N_b is V / (d+1).
        t.pressure_divergence(a * dim + i, b) = tau * inverse_bulk * gai * V / nn;
      }
    }
  return t;
}

}  // namespace vmsolid
