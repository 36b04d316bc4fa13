#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <utility>

#include "vmsolid/error.hpp"
#include "vmsolid/fem.hpp"
#include "vmsolid/linear_solver.hpp"
#include "vmsolid/solver.hpp"
#include "vmsolid/verification.hpp"
#include "vmsolid/vms.hpp"

using namespace vmsolid;

namespace {

Mesh unit_square(int n = 1) {
  BoxSpec spec;
  spec.dim = 2;
  spec.subdivisions = {n, n, 1};
  return generate_box_mesh(spec);
}

Material cook_material() {
  return make_material(MaterialKind::linear_elastic, 250.0, 0.49995, 1.0);
}

std::vector<BoundaryCondition> cook_bcs() {
  return {DirichletBC{"left", Vec3::Zero(), {true, true, true}, {}},
          TractionBC{"right", Vec3(0, 6.25, 0), {}}};
}

std::vector<double> static_tau(const Mesh& m, const Material& mat) {
  return compute_tau_field(m, mat, 1.0, StabilizationParams{});
}

}  // namespace

TEST_CASE("traction on a unit edge is split evenly") {
  const Mesh m = unit_square();
  const Vector f = integrate_traction(m, "xmax", Vec3(0, 6.25, 0));
  for (int a : m.nodes_with_tag("xmax")) {
    CHECK(f(2 * a) == doctest::Approx(0.0));
    CHECK(f(2 * a + 1) == doctest::Approx(3.125));
  }
  CHECK(f.sum() == doctest::Approx(6.25));
  CHECK(integrate_traction(m, "xmax", Vec3::Zero()).norm() == 0.0);
  CHECK_THROWS_AS(integrate_traction(m, "nowhere", Vec3(1, 0, 0)), ConfigError);
}

TEST_CASE("total traction equals t times boundary measure") {
  const Mesh m = generate_cook_mesh(8);
  const Vector f = integrate_traction(m, "right", Vec3(1.5, 6.25, 0));
  double fx = 0.0, fy = 0.0;
  for (Eigen::Index i = 0; i < f.size(); i += 2) {
    fx += f(i);
    fy += f(i + 1);
  }
  CHECK(fx == doctest::Approx(1.5 * 16.0).epsilon(1e-12));
  CHECK(fy == doctest::Approx(100.0).epsilon(1e-12));

  BoxSpec cube;
  cube.subdivisions = {2, 3, 2};
  const Mesh c = generate_box_mesh(cube);
  const Vector fz = integrate_traction(c, "zmax", Vec3(0, 0, -2.0));
  CHECK(fz.sum() == doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("zero load with pinned boundary gives zero solution") {
  const Mesh m(2, {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)}, {{0, 1, 2, -1}},
               {{{0, 1, -1}, "edge"}});
  const Material mat = make_material(MaterialKind::linear_elastic, 1.0, 0.3, 1.0);
  SolverConfig cfg;
  cfg.scheme = Scheme::steady;
  const SteadySolution s =
      solve_steady(m, mat, {DirichletBC{"edge", Vec3::Zero(), {true, true, true}, {}}}, cfg);
  CHECK(s.u.norm() == 0.0);
  CHECK(s.p.norm() == 0.0);
}

TEST_CASE("rigid translation is in the kernel of the steady operator") {
  const Mesh m = generate_cook_mesh(4);
  const Material mat = cook_material();
  const LinearSystem sys = assemble_steady_linear(m, mat, {}, static_tau(m, mat));
  const DofMap dofs(m);
  for (int axis = 0; axis < 2; ++axis) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dofs.total_dofs()));
    for (std::size_t a = 0; a < m.num_nodes(); ++a) v(dofs.displacement(a, axis)) = 1.0;
    const Vector Kv = sys.matrix * v;
    CHECK(Kv.norm() <= 1e-12 * sys.matrix.norm());
  }
}

TEST_CASE("apply_dirichlet") {
  SUBCASE("all dofs constrained to zero gives the identity") {
    const Mesh m = unit_square();
    const Material mat = make_material(MaterialKind::linear_elastic, 1.0, 0.3, 1.0);
    LinearSystem sys = assemble_steady_linear(m, mat, {}, static_tau(m, mat));
    for (Eigen::Index i = 0; i < sys.rhs.size(); ++i) sys.dirichlet[static_cast<int>(i)] = 0.0;
    sys = apply_dirichlet(std::move(sys));
    const Matrix dense(sys.matrix);
    CHECK(dense.isIdentity());
    CHECK(solve_linear_system(sys.matrix, sys.rhs).norm() == 0.0);
  }

  SUBCASE("clamped edge and prescribed value are honoured exactly") {
    const Mesh m = generate_cook_mesh(4);
    const Material mat = cook_material();
    LinearSystem sys = assemble_steady_linear(m, mat, cook_bcs(), static_tau(m, mat));
    const DofMap dofs(m);
    const int probe = dofs.displacement(m.nodes_with_tag("right").front(), 1);
    const double c = 0.123456789012345678;
    sys.dirichlet[probe] = c;
    sys = apply_dirichlet(std::move(sys));
    const Vector x = solve_linear_system(sys.matrix, sys.rhs);
    for (int a : m.nodes_with_tag("left")) {
      CHECK(x(dofs.displacement(a, 0)) == 0.0);
      CHECK(x(dofs.displacement(a, 1)) == 0.0);
    }
    CHECK(x(probe) == c);
  }
}

TEST_CASE("conflicting Dirichlet prescriptions are rejected") {
  const Mesh m = unit_square();
  const std::vector<BoundaryCondition> bcs{
      DirichletBC{"xmin", Vec3::Zero(), {true, true, true}, {}},
      DirichletBC{"ymin", Vec3(1, 0, 0), {true, false, false}, {}}};
  CHECK_THROWS_AS(dirichlet_values(m, bcs, 0.0), ConfigError);
  CHECK_THROWS_AS(check_boundary_conditions(
                      m, {DirichletBC{"xmax", Vec3::Zero(), {true, true, true}, {}},
                          TractionBC{"xmax", Vec3(1, 0, 0), {}}}),
                  ConfigError);
  CHECK_THROWS_AS(check_boundary_conditions(m, {TractionBC{"top", Vec3(1, 0, 0), {}}}),
                  ConfigError);
}

TEST_CASE("reactions balance the applied load") {
  const Mesh m = generate_cook_mesh(8);
  const Material mat = cook_material();
  const auto bcs = cook_bcs();
  const LinearSystem raw = assemble_steady_linear(m, mat, bcs, static_tau(m, mat));
  SolverConfig cfg;
  cfg.scheme = Scheme::steady;
  const SteadySolution s = solve_steady(m, mat, bcs, cfg);
  Vector x(raw.rhs.size());
  x << s.u, s.p;
  const Vector r = raw.matrix * x - raw.rhs;
  double reaction_y = 0.0;
  for (const auto& [dof, value] : raw.dirichlet)
    if (dof % 2 == 1) reaction_y += r(dof);
  // Constrained rows carry internal force minus load, i.e. minus the reaction.
  CHECK(reaction_y == doctest::Approx(-100.0).epsilon(1e-10));
}

TEST_CASE("steady matrix has a structurally symmetric pattern") {
  const Mesh m = generate_cook_mesh(4);
  const Material mat = cook_material();
  const LinearSystem sys = assemble_steady_linear(m, mat, cook_bcs(), static_tau(m, mat));
  std::set<std::pair<int, int>> pattern;
  for (int k = 0; k < sys.matrix.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(sys.matrix, k); it; ++it)
      pattern.emplace(static_cast<int>(it.row()), static_cast<int>(it.col()));
  for (const auto& [i, j] : pattern) CHECK(pattern.count({j, i}) == 1);
}

TEST_CASE("patch test on unstructured meshes") {
  Mat3 A;
  A << 0.01, -0.02, 0.015, 0.03, 0.005, -0.01, -0.02, 0.01, 0.02;
  const Vec3 b(0.1, -0.2, 0.05);

  BoxSpec sq;
  sq.dim = 2;
  sq.subdivisions = {5, 5, 1};
  CHECK(patch_test_error(perturb_interior(generate_box_mesh(sq), 0.25, 1), A, b, 0.3) <= 1e-10);

  BoxSpec cube;
  cube.subdivisions = {3, 3, 3};
  CHECK(patch_test_error(perturb_interior(generate_box_mesh(cube), 0.25, 2), A, b, 0.3) <= 1e-10);
}

TEST_CASE("transient assembly at rest is in equilibrium") {
  const Mesh m = generate_cook_mesh(4, 0.1);
  const Material mat = cook_material();
  const DofMap dofs(m);
  const Vector zu = Vector::Zero(static_cast<Eigen::Index>(dofs.num_displacement_dofs()));
  const Vector zp = Vector::Zero(static_cast<Eigen::Index>(m.num_nodes()));
  const std::vector<double> tau(m.num_elements(), 1e-3);
  const TransientSystem ts = assemble_transient(m, mat, {zu, zp, zp, zu, 1e4, 0.0}, {}, tau);
  // F is rebuilt from the two configurations, so K = 8.3e5 sees round-off.
  CHECK(ts.residual.norm() < 1e-10);
}

TEST_CASE("transient tangent matches finite differences of the residual") {
  // Neo-Hookean cube under a body force, away from equilibrium, with a stored
  // fine-scale history so every term of the residual is active.
  BoxSpec spec;
  spec.subdivisions = {1, 1, 1};
  const Mesh m = generate_box_mesh(spec);
  const Material mat = make_material(MaterialKind::neo_hookean, 10.0, 0.3, 2.0);
  const DofMap dofs(m);
  const auto nu = static_cast<Eigen::Index>(dofs.num_displacement_dofs());
  const auto np = static_cast<Eigen::Index>(m.num_nodes());

  std::mt19937 rng(21);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Vector du(nu), p(np), p_prev(np), a_hist(nu);
  for (Eigen::Index i = 0; i < nu; ++i) du(i) = 0.05 * d(rng);
  for (Eigen::Index i = 0; i < nu; ++i) a_hist(i) = d(rng);
  for (Eigen::Index i = 0; i < np; ++i) p(i) = d(rng);
  for (Eigen::Index i = 0; i < np; ++i) p_prev(i) = d(rng);
  std::vector<Vec3> subscale_prev(m.num_elements());
  for (auto& v : subscale_prev) v = 0.01 * Vec3(d(rng), d(rng), d(rng));
  std::vector<double> tau(m.num_elements());
  for (auto& t : tau) t = 0.02 * (1.5 + d(rng));
  const std::vector<BoundaryCondition> bcs{BodyForceBC{Vec3(0.3, -1.0, 0.5), true, {}, {}}};
  const double c = 40.0;

  auto residual = [&](const Vector& x) {
    const Vector u = x.head(nu), q = x.tail(np);
    const Vector acc = a_hist + c * u;
    return assemble_transient(m, mat, {u, q, p_prev, acc, c, 0.0, subscale_prev}, bcs, tau);
  };

  Vector x(nu + np);
  x << du, p;
  const TransientSystem ts = residual(x);
  const Matrix J(ts.system.matrix);
  CHECK((ts.system.rhs + ts.residual).norm() == 0.0);

  const double h = 1e-6;
  Matrix fd(J.rows(), J.cols());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    Vector xp = x, xm = x;
    xp(k) += h;
    xm(k) -= h;
    fd.col(k) = (residual(xp).residual - residual(xm).residual) / (2 * h);
  }
  CHECK((J - fd).cwiseAbs().maxCoeff() <= 1e-6 * fd.cwiseAbs().maxCoeff());
}

TEST_CASE("element internal force tangent for every material") {
  for (MaterialKind kind : {MaterialKind::linear_elastic, MaterialKind::st_venant_kirchhoff}) {
    const Mesh m(3, {Vec3(0, 0, 0), Vec3(1, 0.1, 0), Vec3(0.2, 1, 0), Vec3(0.1, 0, 1.2)},
                 {{0, 1, 2, 3}}, {});
    const ElementGeometry g = element_geometry(m, 0);
    const Material mat = make_material(kind, 10.0, 0.3, 1.0);
    Mat3 F_prev = Mat3::Identity();
    F_prev(0, 1) = 0.1;
    F_prev(2, 2) = 1.05;
    std::vector<Vec3> du{Vec3(0.01, 0, 0), Vec3(0, 0.02, -0.01), Vec3(0.03, 0, 0.01),
                         Vec3(-0.02, 0.01, 0)};
    const ElementForce ef = element_internal_force(g, 3, F_prev, du, mat, true);
    const double h = 1e-6;
    double err = 0.0;
    for (int a = 0; a < 4; ++a)
      for (int i = 0; i < 3; ++i) {
        auto plus = du, minus = du;
        plus[a][i] += h;
        minus[a][i] -= h;
        const Vector col = (element_internal_force(g, 3, F_prev, plus, mat, true).force -
                            element_internal_force(g, 3, F_prev, minus, mat, true).force) /
                           (2 * h);
        err = std::max(err, (ef.tangent.col(a * 3 + i) - col).cwiseAbs().maxCoeff());
      }
    CHECK(err <= 1e-6 * ef.tangent.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("simplex quadrature integrates polynomials exactly") {
  // Reference triangle: integral of x^a y^b is a! b! / (a + b + 2)!.
  const QuadratureRule r5 = simplex_quadrature(2, 5);
  double sum = 0.0;
  for (std::size_t q = 0; q < r5.points.size(); ++q) {
    const double x = r5.points[q][1], y = r5.points[q][2];
    sum += r5.weights[q] * 0.5 * std::pow(x, 3) * std::pow(y, 2);
  }
  CHECK(sum == doctest::Approx(6.0 * 2.0 / 5040.0).epsilon(1e-13));

  // Reference tetra: integral of x y is 1/120.
  const QuadratureRule r2 = simplex_quadrature(3, 2);
  sum = 0.0;
  for (std::size_t q = 0; q < r2.points.size(); ++q)
    sum += r2.weights[q] / 6.0 * r2.points[q][1] * r2.points[q][2];
  CHECK(sum == doctest::Approx(1.0 / 120.0).epsilon(1e-13));
}
