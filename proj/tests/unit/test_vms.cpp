#include <doctest.h>

#include "vmsolid/error.hpp"
#include "vmsolid/fem.hpp"
#include "vmsolid/vms.hpp"

using namespace vmsolid;

TEST_CASE("tau examples") {
  CHECK(compute_tau(1.0, 0.5, 1.0, 1.0, TauModel::static_model) == doctest::Approx(1.0));
  CHECK(compute_tau(0.1, 500.0, 1.0, 1.0, TauModel::static_model) ==
        doctest::Approx(1e-5).epsilon(1e-12));
  CHECK(compute_tau(1.0, 0.5, 1.0, 1e12, TauModel::dynamic_model) == doctest::Approx(1.0));
  // The inertial term only shortens the time scale.
  CHECK(compute_tau(1.0, 0.5, 1.0, 0.1, TauModel::dynamic_model) < 1.0);
  for (double h : {0.3, 1.0, 4.0})
    CHECK(compute_tau(h / 2, 2.0, 1.0, 1.0, TauModel::static_model) ==
          doctest::Approx(compute_tau(h, 2.0, 1.0, 1.0, TauModel::static_model) / 4));
  CHECK(compute_tau(1.0, 0.5, 1.0, 1.0, TauModel::static_model, 0.25) == doctest::Approx(0.25));

  CHECK_THROWS_AS(compute_tau(0.0, 1.0, 1.0, 1.0, TauModel::static_model), ConfigError);
  CHECK_THROWS_AS(compute_tau(1.0, 0.0, 1.0, 1.0, TauModel::static_model), ConfigError);
  CHECK_THROWS_AS(compute_tau(1.0, 1.0, 1.0, 0.0, TauModel::dynamic_model), ConfigError);
  CHECK(tau_model_from_string(to_string(TauModel::dynamic_model)) == TauModel::dynamic_model);
  CHECK_THROWS_AS(tau_model_from_string("fast"), ConfigError);
}

TEST_CASE("tau field") {
  const Mesh m = generate_cook_mesh(4);
  const Material mat = make_material(MaterialKind::linear_elastic, 250.0, 0.3, 1.0);
  const auto tau = compute_tau_field(m, mat, 0.1, StabilizationParams{});
  REQUIRE(tau.size() == m.num_elements());
  for (std::size_t e = 0; e < tau.size(); ++e) {
    const double h = element_geometry(m, e).h;
    CHECK(tau[e] == doctest::Approx(h * h / (2 * mat.moduli.mu)));
  }
  StabilizationParams off;
  off.enabled = false;
  for (double t : compute_tau_field(m, mat, 0.1, off)) CHECK(t == 0.0);
}

TEST_CASE("fine-scale terms") {
  const Mesh tri(2, {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)}, {{0, 1, 2, -1}}, {});
  const ElementGeometry g = element_geometry(tri, 0);

  SUBCASE("tau = 0 gives nothing") {
    const FineScaleTerms t = fine_scale_pressure_terms(g, 2, 0.0, Vec3(1, 2, 0), 0.5, true);
    CHECK(t.pressure_laplacian.norm() == 0.0);
    CHECK(t.force_projection.norm() == 0.0);
    CHECK(t.divergence_penalty.norm() == 0.0);
    CHECK(t.pressure_divergence.norm() == 0.0);
  }

  SUBCASE("tau = 1 pressure block is the P1 Laplacian") {
    const FineScaleTerms t = fine_scale_pressure_terms(g, 2, 1.0, Vec3::Zero(), 0.0, false);
    Matrix expected(3, 3);
    expected << 1.0, -0.5, -0.5, -0.5, 0.5, 0.0, -0.5, 0.0, 0.5;
    CHECK((t.pressure_laplacian - expected).norm() < 1e-15);
    // Constant pressure has no gradient.
    CHECK((t.pressure_laplacian * Vector::Ones(3)).norm() < 1e-15);
    CHECK(t.divergence_penalty.norm() == 0.0);
  }

  SUBCASE("force projection and divergence blocks") {
    const Vec3 r(2.0, -1.0, 0.0);
    const double tau = 0.3, invK = 0.1;
    const FineScaleTerms t = fine_scale_pressure_terms(g, 2, tau, r, invK, true);
    for (int a = 0; a < 3; ++a)
      CHECK(t.force_projection(a) ==
            doctest::Approx(tau * g.volume * g.gradients.col(a).dot(r)));
    // Rigid translation has no divergence.
    Vector shift = Vector::Zero(6);
    for (int a = 0; a < 3; ++a) shift(2 * a) = 1.0;
    CHECK((t.divergence_penalty * shift).norm() < 1e-15);
    // Column sums of (p, div w) against p = 1: tau/K * V * grad N_a.
    const Vector ones = t.pressure_divergence * Vector::Ones(3);
    for (int a = 0; a < 3; ++a)
      for (int i = 0; i < 2; ++i)
        CHECK(ones(2 * a + i) == doctest::Approx(tau * invK * g.volume * g.gradients(i, a)));
  }
}

TEST_CASE("vanishing alpha recovers the Galerkin system") {
  const Mesh m = generate_cook_mesh(4);
  const Material mat = make_material(MaterialKind::linear_elastic, 250.0, 0.49995, 1.0);
  StabilizationParams tiny;
  tiny.alpha = 1e-300;
  StabilizationParams off;
  off.enabled = false;
  const LinearSystem a = assemble_steady_linear(m, mat, {}, compute_tau_field(m, mat, 1.0, tiny));
  const LinearSystem b = assemble_steady_linear(m, mat, {}, compute_tau_field(m, mat, 1.0, off));
  CHECK((Matrix(a.matrix) - Matrix(b.matrix)).norm() == 0.0);
}
