#include "vmsolid/fem.hpp"

#include <algorithm>
#include <cmath>

#include "vmsolid/error.hpp"

namespace vmsolid {

namespace {

using Triplet = Eigen::Triplet<double, int>;

double facet_measure(const Mesh& mesh, const BoundaryFacet& f) {
  const auto& x = mesh.nodes_current();
  if (mesh.dim() == 2) return (x[f.nodes[1]] - x[f.nodes[0]]).norm();
  return 0.5 * (x[f.nodes[1]] - x[f.nodes[0]])
                   .cross(x[f.nodes[2]] - x[f.nodes[0]])
                   .norm();
}

/// Body force on element e at time t: element mean of the force density and
/// its consistent nodal load (integral of f N_a).
struct ElementBodyLoad {
  Vec3 mean = Vec3::Zero();
  std::array<Vec3, 4> nodal{Vec3::Zero(), Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
};

ElementBodyLoad element_body_load(const Mesh& mesh, const Material& material,
                                  const std::vector<BoundaryCondition>& bcs,
                                  std::size_t e, double t) {
  ElementBodyLoad load;
  const int dim = mesh.dim();
  const int nn = dim + 1;
  const double V = mesh.signed_volume(e);
  const auto nodes = mesh.element(e);
  for (const auto& bc : bcs) {
    const auto* body = std::get_if<BodyForceBC>(&bc);
    if (!body) continue;
    const double scale = body->time(t);
    if (body->field) {
      const QuadratureRule q = simplex_quadrature(dim, 2);
      for (std::size_t k = 0; k < q.points.size(); ++k) {
        Vec3 x = Vec3::Zero();
        for (int a = 0; a < nn; ++a) x += q.points[k][a] * mesh.nodes_current()[nodes[a]];
        const Vec3 f = scale * body->field(x);
        load.mean += q.weights[k] * f;
        for (int a = 0; a < nn; ++a) load.nodal[a] += q.weights[k] * q.points[k][a] * V * f;
      }
      continue;
    }
    Vec3 f = body->value * scale;
    if (body->per_unit_mass) f *= material.rho0 / jacobian_to_reference(mesh, e);
    load.mean += f;
    for (int a = 0; a < nn; ++a) load.nodal[a] += f * V / nn;
  }
  if (dim == 2) {
    load.mean.z() = 0.0;
    for (auto& f : load.nodal) f.z() = 0.0;
  }
  return load;
}

SparseMatrix from_triplets(std::size_t n, const std::vector<Triplet>& triplets) {
  SparseMatrix m(static_cast<int>(n), static_cast<int>(n));
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

/// d sigma for St. Venant-Kirchhoff, full (not deviatoric).
Mat3 svk_cauchy_derivative(const Material& m, const Mat3& F, const Mat3& dF) {
  const double mu = m.moduli.mu, lambda = m.moduli.lambda();
  const double J = F.determinant();
  const Mat3 E = 0.5 * (F.transpose() * F - Mat3::Identity());
  const Mat3 S = lambda * E.trace() * Mat3::Identity() + 2.0 * mu * E;
  const Mat3 dE = 0.5 * (F.transpose() * dF + dF.transpose() * F);
  const Mat3 dS = lambda * dE.trace() * Mat3::Identity() + 2.0 * mu * dE;
  const Mat3 sigma = F * S * F.transpose() / J;
  const double dlogJ = (F.inverse() * dF).trace();
  return -dlogJ * sigma +
         (dF * S * F.transpose() + F * dS * F.transpose() + F * S * dF.transpose()) / J;
}

double constitutive_pressure_derivative(const Material& m, const Mat3& F,
                                        const Mat3& dF) {
  switch (m.kind) {
    case MaterialKind::linear_elastic:
      return m.moduli.K * dF.trace();
    case MaterialKind::neo_hookean: {
      const double J = F.determinant();
      const double dJ = J * (F.inverse() * dF).trace();
      return 0.5 * m.moduli.K * (1.0 + 1.0 / (J * J)) * dJ;
    }
    case MaterialKind::st_venant_kirchhoff:
      return svk_cauchy_derivative(m, F, dF).trace() / 3.0;
  }
  return 0.0;
}

}  // namespace

double TimeFunction::operator()(double t) const {
  switch (kind) {
    case Kind::constant: return 1.0;
    case Kind::ramp: return duration > 0.0 ? std::clamp(t / duration, 0.0, 1.0) : 1.0;
    case Kind::cosine: return std::cos(omega * t);
  }
  return 1.0;
}

void check_boundary_conditions(const Mesh& mesh,
                               const std::vector<BoundaryCondition>& bcs) {
  std::map<std::string, std::array<bool, 3>> constrained;
  for (const auto& bc : bcs) {
    if (const auto* d = std::get_if<DirichletBC>(&bc)) {
      if (!mesh.has_tag(d->tag))
        throw ConfigError("unknown boundary tag '" + d->tag + "'");
      auto& c = constrained[d->tag];
      for (int i = 0; i < 3; ++i) c[i] = c[i] || d->components[i];
    }
  }
  for (const auto& bc : bcs) {
    if (const auto* t = std::get_if<TractionBC>(&bc)) {
      if (!mesh.has_tag(t->tag))
        throw ConfigError("unknown boundary tag '" + t->tag + "'");
      auto it = constrained.find(t->tag);
      if (it == constrained.end()) continue;
      for (int i = 0; i < mesh.dim(); ++i)
        if (it->second[i] && t->value[i] != 0.0)
          throw ConfigError("tag '" + t->tag +
                            "' carries both a Dirichlet and a traction condition on axis " +
                            std::to_string(i));
    }
  }
}

std::map<int, double> dirichlet_values(const Mesh& mesh,
                                       const std::vector<BoundaryCondition>& bcs,
                                       double t) {
  const DofMap dofs(mesh);
  std::map<int, double> values;
  for (const auto& bc : bcs) {
    const auto* d = std::get_if<DirichletBC>(&bc);
    if (!d) continue;
    if (!mesh.has_tag(d->tag))
      throw ConfigError("unknown boundary tag '" + d->tag + "'");
    const double scale = d->time(t);
    for (int node : mesh.nodes_with_tag(d->tag))
      for (int i = 0; i < mesh.dim(); ++i) {
        if (!d->components[i]) continue;
        const int dof = dofs.displacement(node, i);
        const double v = d->value[i] * scale;
        auto [it, inserted] = values.emplace(dof, v);
        if (!inserted && it->second != v)
          throw ConfigError("conflicting Dirichlet prescriptions on dof " +
                            std::to_string(dof));
      }
  }
  return values;
}

Vector integrate_traction(const Mesh& mesh, const std::string& tag, const Vec3& t) {
  if (!mesh.has_tag(tag)) throw ConfigError("unknown boundary tag '" + tag + "'");
  const int dim = mesh.dim();
  Vector load = Vector::Zero(static_cast<Eigen::Index>(mesh.num_nodes() * dim));
  for (const auto& f : mesh.boundary_facets()) {
    if (f.tag != tag) continue;
    const double share = facet_measure(mesh, f) / dim;
    for (int a = 0; a < dim; ++a)
      for (int i = 0; i < dim; ++i) load(f.nodes[a] * dim + i) += t[i] * share;
  }
  return load;
}

Vector external_load(const Mesh& mesh, const Material& material,
                     const std::vector<BoundaryCondition>& bcs, double t) {
  const int dim = mesh.dim();
  const int nn = dim + 1;
  Vector load = Vector::Zero(static_cast<Eigen::Index>(mesh.num_nodes() * dim));
  for (const auto& bc : bcs)
    if (const auto* tr = std::get_if<TractionBC>(&bc))
      load += integrate_traction(mesh, tr->tag, tr->value * tr->time(t));

  bool has_body = false;
  for (const auto& bc : bcs) has_body |= std::holds_alternative<BodyForceBC>(bc);
  if (!has_body) return load;
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const ElementBodyLoad body = element_body_load(mesh, material, bcs, e, t);
    const auto nodes = mesh.element(e);
    for (int a = 0; a < nn; ++a)
      for (int i = 0; i < dim; ++i) load(nodes[a] * dim + i) += body.nodal[a][i];
  }
  return load;
}

LinearSystem assemble_steady_linear(const Mesh& mesh, const Material& material,
                                    const std::vector<BoundaryCondition>& bcs,
                                    std::span<const double> tau, double t) {
  if (material.kind != MaterialKind::linear_elastic)
    throw ConfigError("steady assembly requires a linear elastic material");
  if (tau.size() != mesh.num_elements())
    throw ConfigError("steady assembly: tau field missing or of wrong size");

  const DofMap dofs(mesh);
  const int dim = mesh.dim();
  const int nn = dim + 1;
  const double mu = material.moduli.mu;
  const double inv_k = material.moduli.inverse_bulk();

  std::vector<Triplet> triplets;
  triplets.reserve(mesh.num_elements() * static_cast<std::size_t>(nn * (dim + 1)) *
                   (nn * (dim + 1)));
  LinearSystem sys;
  sys.rhs = Vector::Zero(static_cast<Eigen::Index>(dofs.total_dofs()));

  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const ElementGeometry g = element_geometry(mesh, e);
    const auto nodes = mesh.element(e);
    const double V = g.volume;
    const Vec3 f = element_body_load(mesh, material, bcs, e, t).mean;
    const FineScaleTerms fs = fine_scale_pressure_terms(g, dim, tau[e], f, inv_k, false);

    for (int a = 0; a < nn; ++a) {
      const Vec3 ga = g.gradients.col(a);
      for (int b = 0; b < nn; ++b) {
        const Vec3 gb = g.gradients.col(b);
        const double gab = ga.dot(gb);
        for (int i = 0; i < dim; ++i)
          for (int k = 0; k < dim; ++k) {
            const double sym = 0.5 * ((i == k ? gab : 0.0) + ga[k] * gb[i]);
            const double val = V * 2.0 * mu * (sym - ga[i] * gb[k] / 3.0);
            triplets.emplace_back(dofs.displacement(nodes[a], i),
                                  dofs.displacement(nodes[b], k), val);
          }
        for (int i = 0; i < dim; ++i) {
          // (p_b, div w_a) and (div u_a, q_b)
          const double c = V * ga[i] / nn;
          triplets.emplace_back(dofs.displacement(nodes[a], i), dofs.pressure(nodes[b]), c);
          triplets.emplace_back(dofs.pressure(nodes[b]), dofs.displacement(nodes[a], i), c);
        }
        const double mass = V * (a == b ? 2.0 : 1.0) / (nn * (nn + 1));
        triplets.emplace_back(dofs.pressure(nodes[a]), dofs.pressure(nodes[b]),
                              -inv_k * mass - fs.pressure_laplacian(a, b));
      }
      sys.rhs(dofs.pressure(nodes[a])) += fs.force_projection(a);
    }
  }
  sys.matrix = from_triplets(dofs.total_dofs(), triplets);

  sys.rhs.head(static_cast<Eigen::Index>(dofs.num_displacement_dofs())) +=
      external_load(mesh, material, bcs, t);
  sys.dirichlet = dirichlet_values(mesh, bcs, t);
  return sys;
}

LinearSystem apply_dirichlet(LinearSystem system) {
  const int n = static_cast<int>(system.matrix.rows());
  std::vector<char> fixed(n, 0);
  for (const auto& [dof, value] : system.dirichlet) {
    if (dof < 0 || dof >= n) throw ConfigError("Dirichlet dof out of range");
    fixed[dof] = 1;
  }
  std::vector<Triplet> triplets;
  triplets.reserve(system.matrix.nonZeros());
  for (int row = 0; row < n; ++row) {
    if (fixed[row]) continue;
    for (SparseMatrix::InnerIterator it(system.matrix, row); it; ++it) {
      const int col = it.col();
      if (fixed[col])
        system.rhs(row) -= it.value() * system.dirichlet.at(col);
      else
        triplets.emplace_back(row, col, it.value());
    }
  }
  for (const auto& [dof, value] : system.dirichlet) {
    triplets.emplace_back(dof, dof, 1.0);
    system.rhs(dof) = value;
  }
  system.matrix = from_triplets(static_cast<std::size_t>(n), triplets);
  return system;
}

ElementForce element_internal_force(const ElementGeometry& g, int dim,
                                    const Mat3& F_prev,
                                    std::span<const Vec3> delta_u,
                                    const Material& material,
                                    bool include_volumetric) {
  const int nn = dim + 1;
  const int nu = nn * dim;
  const double V = g.volume;

  Mat3 grad = Mat3::Zero();
  for (int a = 0; a < nn; ++a) grad += delta_u[a] * g.gradients.col(a).transpose();
  if (dim == 2) {
    grad.row(2).setZero();
    grad.col(2).setZero();
  }
  ElementForce out;
  out.F = (Mat3::Identity() + grad) * F_prev;
  const double J = out.F.determinant();
  if (!(J > 0.0))
    throw KinematicInversion("kinematic inversion: det F = " + std::to_string(J));

  Mat3 stress = deviatoric_stress(material, out.F);
  if (include_volumetric)
    stress += constitutive_pressure(material, out.F) * Mat3::Identity();

  out.force = Vector::Zero(nu);
  out.tangent = Matrix::Zero(nu, nu);
  for (int a = 0; a < nn; ++a) {
    const Vec3 f = V * stress * g.gradients.col(a);
    out.force.segment(a * dim, dim) = f.head(dim);
  }
  for (int b = 0; b < nn; ++b) {
    const Vec3 pulled = F_prev.transpose() * g.gradients.col(b);
    for (int k = 0; k < dim; ++k) {
      Mat3 dF = Mat3::Zero();
      dF.row(k) = pulled.transpose();
      Mat3 ds = deviatoric_stress_derivative(material, out.F, dF);
      if (include_volumetric)
        ds += constitutive_pressure_derivative(material, out.F, dF) * Mat3::Identity();
      for (int a = 0; a < nn; ++a) {
        const Vec3 col = V * ds * g.gradients.col(a);
        out.tangent.block(a * dim, b * dim + k, dim, 1) = col.head(dim);
      }
    }
  }
  return out;
}

TransientSystem assemble_transient(const Mesh& mesh, const Material& material,
                                   const TransientFields& fields,
                                   const std::vector<BoundaryCondition>& bcs,
                                   std::span<const double> tau) {
  if (tau.size() != mesh.num_elements())
    throw ConfigError("transient assembly: tau field missing or of wrong size");
  const DofMap dofs(mesh);
  const int dim = mesh.dim();
  const int nn = dim + 1;
  const int nu = nn * dim;
  const double inv_k = material.moduli.inverse_bulk();
  const double c_acc = fields.acceleration_coefficient;
  const bool dynamic = c_acc != 0.0;
  const auto ndofs = static_cast<Eigen::Index>(dofs.total_dofs());

  if (!fields.subscale_prev.empty() && fields.subscale_prev.size() != mesh.num_elements())
    throw ConfigError("transient assembly: subscale field of wrong size");
  TransientSystem out;
  out.residual = Vector::Zero(ndofs);
  out.subscale.assign(mesh.num_elements(), Vec3::Zero());
  Vector scale = Vector::Zero(ndofs);
  std::vector<Triplet> triplets;
  triplets.reserve(mesh.num_elements() * static_cast<std::size_t>(nn * (dim + 1)) *
                   (nn * (dim + 1)));

  std::vector<Vec3> du(nn), acc(nn);
  Vector p(nn), dp(nn);
  std::vector<int> udof(nu), pdof(nn);

  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const ElementGeometry g = element_geometry(mesh, e);
    const ElementGeometry g0 = reference_element_geometry(mesh, e);
    const auto nodes = mesh.element(e);
    const double V = g.volume;
    const double rho = material.rho0 * g0.volume / V;

    Mat3 F_prev = Mat3::Zero();
    for (int a = 0; a < nn; ++a)
      F_prev += mesh.nodes_current()[nodes[a]] * g0.gradients.col(a).transpose();
    if (dim == 2) F_prev(2, 2) = 1.0;

    Vec3 acc_mean = Vec3::Zero();
    for (int a = 0; a < nn; ++a) {
      du[a].setZero();
      acc[a].setZero();
      for (int i = 0; i < dim; ++i) {
        udof[a * dim + i] = dofs.displacement(nodes[a], i);
        du[a][i] = fields.delta_u(nodes[a] * dim + i);
        if (dynamic) acc[a][i] = fields.acceleration(nodes[a] * dim + i);
      }
      pdof[a] = dofs.pressure(nodes[a]);
      p(a) = fields.pressure(nodes[a]);
      dp(a) = fields.pressure(nodes[a]) - fields.pressure_prev(nodes[a]);
      acc_mean += acc[a];
    }
    acc_mean /= nn;
    const double p_mean = p.mean();

    const ElementForce internal = element_internal_force(g, dim, F_prev, du, material);
    Vector r_u = internal.force;
    Matrix k_uu = internal.tangent;
    Vector s_u = internal.force.cwiseAbs();
    Matrix k_up = Matrix::Zero(nu, nn);
    Matrix k_pu = Matrix::Zero(nn, nu);
    Matrix k_pp = Matrix::Zero(nn, nn);
    Vector r_p = Vector::Zero(nn);
    Vector s_p = Vector::Zero(nn);

    const ElementBodyLoad body = element_body_load(mesh, material, bcs, e, fields.time);
    const Vec3& f = body.mean;
    const Vec3 residual_force = f - (dynamic ? Vec3(rho * acc_mean) : Vec3::Zero());
    Vec3 grad_p = Vec3::Zero();
    for (int a = 0; a < nn; ++a) grad_p += p(a) * g.gradients.col(a);
    out.subscale[e] = tau[e] * (grad_p + residual_force);
    if (dim == 2) out.subscale[e].z() = 0.0;
    const Vec3 subscale_prev =
        fields.subscale_prev.empty() ? Vec3::Zero() : fields.subscale_prev[e];
    const FineScaleTerms fs =
        fine_scale_pressure_terms(g, dim, tau[e], residual_force, inv_k, true);

    double div = 0.0;
    for (int b = 0; b < nn; ++b) div += g.gradients.col(b).dot(du[b]);
    const double elem_mass = material.rho0 * g0.volume;

    for (int a = 0; a < nn; ++a) {
      const Vec3 ga = g.gradients.col(a);
      for (int i = 0; i < dim; ++i) {
        const int r = a * dim + i;
        // Consistent mass, conserved as rho0 V0.
        if (dynamic) {
          double m_acc = 0.0;
          for (int b = 0; b < nn; ++b) {
            const double m_ab = elem_mass * (a == b ? 2.0 : 1.0) / (nn * (nn + 1));
            m_acc += m_ab * acc[b][i];
            k_uu(r, b * dim + i) += m_ab * c_acc;
          }
          r_u(r) += m_acc;
          s_u(r) += std::abs(m_acc);
        }
        const double pc = V * ga[i] * p_mean;
        const double fe = body.nodal[a][i];
        r_u(r) += pc - fe;
        s_u(r) += std::abs(pc) + std::abs(fe);
        for (int b = 0; b < nn; ++b) k_up(r, b) += V * ga[i] / nn;
      }
    }
    // Fine-scale pressure fed back into the momentum equation.
    Vector du_vec(nu);
    for (int a = 0; a < nn; ++a)
      for (int i = 0; i < dim; ++i) du_vec(a * dim + i) = du[a][i];
    const Vector stab_u = fs.divergence_penalty * du_vec - fs.pressure_divergence * dp;
    r_u += stab_u;
    s_u += stab_u.cwiseAbs();
    k_uu += fs.divergence_penalty;
    k_up -= fs.pressure_divergence;

    for (int a = 0; a < nn; ++a) {
      double mass_dp = 0.0;
      for (int b = 0; b < nn; ++b) {
        const double m_ab = V * (a == b ? 2.0 : 1.0) / (nn * (nn + 1));
        mass_dp += m_ab * dp(b);
        k_pp(a, b) = -inv_k * m_ab - fs.pressure_laplacian(a, b);
        for (int k = 0; k < dim; ++k) {
          k_pu(a, b * dim + k) = V * g.gradients(k, b) / nn;
          if (dynamic)
            k_pu(a, b * dim + k) += tau[e] * V * rho * g.gradients(k, a) * c_acc / nn;
        }
      }
      const double lap = fs.pressure_laplacian.row(a).dot(p);
      const double terms[] = {V * div / nn, -inv_k * mass_dp, -lap,
                              -fs.force_projection(a),
                              V * g.gradients.col(a).dot(subscale_prev)};
      for (double t : terms) {
        r_p(a) += t;
        s_p(a) += std::abs(t);
      }
    }

    for (int r = 0; r < nu; ++r) {
      out.residual(udof[r]) += r_u(r);
      scale(udof[r]) += s_u(r);
      for (int c = 0; c < nu; ++c) triplets.emplace_back(udof[r], udof[c], k_uu(r, c));
      for (int c = 0; c < nn; ++c) triplets.emplace_back(udof[r], pdof[c], k_up(r, c));
    }
    for (int r = 0; r < nn; ++r) {
      out.residual(pdof[r]) += r_p(r);
      scale(pdof[r]) += s_p(r);
      for (int c = 0; c < nu; ++c) triplets.emplace_back(pdof[r], udof[c], k_pu(r, c));
      for (int c = 0; c < nn; ++c) triplets.emplace_back(pdof[r], pdof[c], k_pp(r, c));
    }
  }

  for (const auto& bc : bcs)
    if (const auto* tr = std::get_if<TractionBC>(&bc)) {
      const Vector load =
          integrate_traction(mesh, tr->tag, tr->value * tr->time(fields.time));
      out.residual.head(load.size()) -= load;
      scale.head(load.size()) += load.cwiseAbs();
    }

  out.system.matrix = from_triplets(dofs.total_dofs(), triplets);
  out.system.rhs = -out.residual;
  out.force_scale = scale.norm();
  return out;
}

Mat3 element_gradient(const ElementGeometry& g, const Mesh& mesh, std::size_t e,
                      const Vector& nodal) {
  const int dim = mesh.dim();
  const auto nodes = mesh.element(e);
  Mat3 grad = Mat3::Zero();
  for (int a = 0; a <= dim; ++a) {
    Vec3 u = Vec3::Zero();
    for (int i = 0; i < dim; ++i) u[i] = nodal(nodes[a] * dim + i);
    grad += u * g.gradients.col(a).transpose();
  }
  return grad;
}

QuadratureRule simplex_quadrature(int dim, int degree) {
  QuadratureRule q;
  auto perm3 = [&](double a, double b, double w) {
    q.points.push_back({a, b, b, 0.0});
    q.points.push_back({b, a, b, 0.0});
    q.points.push_back({b, b, a, 0.0});
    for (int i = 0; i < 3; ++i) q.weights.push_back(w);
  };
  if (dim == 2) {
    if (degree <= 1) {
      q.points.push_back({1.0 / 3, 1.0 / 3, 1.0 / 3, 0.0});
      q.weights.push_back(1.0);
    } else if (degree == 2) {
      perm3(2.0 / 3, 1.0 / 6, 1.0 / 3);
    } else if (degree <= 5) {
      q.points.push_back({1.0 / 3, 1.0 / 3, 1.0 / 3, 0.0});
      q.weights.push_back(0.225);
      perm3(0.059715871789770, 0.470142064105115, 0.132394152788506);
      perm3(0.797426985353087, 0.101286507323456, 0.125939180544827);
    } else {
      throw ConfigError("no triangle rule of degree " + std::to_string(degree));
    }
    return q;
  }
  if (degree <= 1) {
    q.points.push_back({0.25, 0.25, 0.25, 0.25});
    q.weights.push_back(1.0);
  } else if (degree == 2) {
    const double a = 0.5854101966249685, b = 0.1381966011250105;
    for (int i = 0; i < 4; ++i) {
      std::array<double, 4> p{b, b, b, b};
      p[i] = a;
      q.points.push_back(p);
      q.weights.push_back(0.25);
    }
  } else {
    throw ConfigError("no tetrahedron rule of degree " + std::to_string(degree));
  }
  return q;
}

}  // namespace vmsolid
