#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

#include "vmsolid/cases.hpp"
#include "vmsolid/diagnostics.hpp"
#include "vmsolid/error.hpp"

using namespace vmsolid;

TEST_CASE("preset catalogue") {
  const auto names = preset_names();
  CHECK(names.size() == 7);
  for (const auto& n : names) {
    const CaseConfig c = preset(n);
    CHECK(c.name == n);
    CHECK_NOTHROW(validate(c));
    CHECK(!c.output.probes.empty());
  }
  CHECK_THROWS_AS(preset("gear"), ConfigError);
}

TEST_CASE("preset values") {
  const CaseConfig cook = preset("cook_static");
  CHECK(cook.material.kind == MaterialKind::linear_elastic);
  CHECK(cook.material.E == 250.0);
  CHECK(cook.material.nu == 0.49995);
  CHECK(cook.material.rho0 == 1.0);

  CHECK(build_material(preset("csm2")).moduli.mu == doctest::Approx(2.0e6));
  CHECK(build_material(preset("csm1")).moduli.mu == doctest::Approx(5.0e5));
  CHECK(preset("csm3").solver.scheme == Scheme::bdf2);

  const CaseConfig tr = preset("cook_transient");
  CHECK(tr.t_end == 7.0);
  CHECK(tr.geometry.scale == 0.1);

  const CaseConfig beam = preset("bending_beam_3d");
  CHECK(beam.material.kind == MaterialKind::neo_hookean);
  CHECK(beam.material.E == 1.7e7);
  CHECK(beam.material.nu == 0.499);
  CHECK(beam.material.rho0 == 1.1e3);
  CHECK(beam.t_end == 2.0);
  CHECK(build_mesh(beam).num_elements() <= 500);

  const CaseConfig up = preset("upsetting");
  CHECK(up.material.E == 2.0e5);
  CHECK(up.material.nu == 0.4999);
}

TEST_CASE("bending beam initial velocity") {
  const CaseConfig beam = preset("bending_beam_3d");
  REQUIRE(has_initial_velocity(beam));
  const Mesh m = build_mesh(beam);
  const Vector v = initial_velocity(beam, m);
  int tips = 0;
  for (std::size_t a = 0; a < m.num_nodes(); ++a) {
    const Vec3& x = m.nodes_current()[a];
    CHECK(v(3 * a) == doctest::Approx(5.0 * x.y() / 3.0));
    CHECK(v(3 * a + 1) == 0.0);
    CHECK(v(3 * a + 2) == 0.0);
    if (std::abs(x.y() - 6.0) < 1e-12) {
      ++tips;
      CHECK(v(3 * a) == doctest::Approx(10.0));
    }
  }
  CHECK(tips > 0);
}

TEST_CASE("transient Cook geometry is the static one scaled by 0.1") {
  const Mesh a = build_mesh(preset("cook_static"));
  const Mesh b = build_mesh(preset("cook_transient"));
  REQUIRE(a.num_nodes() == b.num_nodes());
  for (std::size_t i = 0; i < a.num_nodes(); ++i)
    CHECK((b.nodes_current()[i] - 0.1 * a.nodes_current()[i]).norm() <= 1e-14);
}

TEST_CASE("every preset round-trips through the case format") {
  for (const auto& n : preset_names()) {
    const CaseConfig c = preset(n);
    const CaseConfig back = parse_case(serialize_case(c));
    CHECK(back.name == c.name);
    CHECK(back.geometry == c.geometry);
    CHECK(back.material == c.material);
    CHECK(back.bcs == c.bcs);
    CHECK(back.t_end == c.t_end);
    CHECK(back.solver == c.solver);
    CHECK(back.output == c.output);
    CHECK(serialize_case(back) == serialize_case(c));
  }
}

TEST_CASE("preset with an override") {
  const CaseConfig c = parse_case(
      "# smallest file\n"
      "case.preset = \"cook_static\"\n"
      "geometry.n = 16\n"
      "mesh.scale = 2\n");
  CHECK(c.geometry.n == 16);
  CHECK(c.geometry.scale == 2.0);
  CHECK(c.material.E == 250.0);

  CaseConfig d = preset("cook_static");
  apply_override(d, "mesh.n=8");
  apply_override(d, "bc.load.value=(0, 3, 0)");
  apply_override(d, "time.scheme = quasistatic");
  CHECK(d.geometry.n == 8);
  CHECK(d.bcs[1].value == Triple{0.0, 3.0, 0.0});
  CHECK(d.solver.scheme == Scheme::quasistatic);
  CHECK_THROWS_AS(apply_override(d, "mesh.n"), ConfigError);
  CHECK_THROWS_AS(apply_override(d, "mesh.colour=red"), ConfigError);
}

TEST_CASE("parse errors name the line") {
  CHECK_THROWS_WITH_AS(parse_case("case.preset = cook_static\n\nmateriall.E = 3\n"),
                       doctest::Contains("line 3"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_case("case.preset = cook_static\ngeometry.n = many\n"),
                       doctest::Contains("line 2"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_case("case.preset = cook_static\nthis is not a key\n"),
                       doctest::Contains("line 2"), ConfigError);
  CHECK_THROWS_AS(parse_case("case.preset = cook_static\nmaterial.nu = 0.6\n"), ConfigError);
  CHECK_THROWS_AS(parse_case("case.preset = nothing\n"), ConfigError);
  // Without a preset the geometry, material and time sections are required.
  CHECK_THROWS_AS(parse_case("case.name = bare\nmaterial.E = 1\n"), ConfigError);
}

TEST_CASE("a complete case file without a preset") {
  const CaseConfig c = parse_case(R"(
case.name = "plate"
geometry.kind = box
geometry.dim = 2
geometry.extents = (2, 1)
geometry.subdivisions = (4, 2)
material.kind = neo_hookean
material.E = 100
material.nu = 0.45
material.rho0 = 2
time.scheme = bdf1
time.dt = 0.1
time.t_end = 0.5
bc.fix.type = dirichlet
bc.fix.tag = xmin
bc.pull.type = traction
bc.pull.tag = xmax
bc.pull.value = (1, 0, 0)
bc.pull.time = ramp
output.probe.end.point = (2, 0.5)
output.probe.end.field = u_x
)");
  CHECK(c.name == "plate");
  CHECK(c.geometry.dim == 2);
  CHECK(c.bcs.size() == 2);
  const Mesh m = build_mesh(c);
  CHECK(m.num_elements() == 16);
  CHECK(build_boundary_conditions(c).size() == 2);
  CHECK(c.output.probes.at(0).field == ProbeField::u_x);
}

TEST_CASE("bc entries can be removed") {
  CaseConfig c = preset("cook_static");
  apply_override(c, "bc.load.type=none");
  CHECK(c.bcs.size() == 1);
}

TEST_CASE("von Mises stress") {
  CHECK(von_mises(Mat3::Zero()) == 0.0);
  const double s = 3.0;
  const Mat3 uni = Vec3(2 * s / 3, -s / 3, -s / 3).asDiagonal();
  CHECK(von_mises(uni) == doctest::Approx(s));
  const Mat3 nh = Vec3(2.25, -1.5, -0.75).asDiagonal();
  CHECK(von_mises(nh) == doctest::Approx(std::sqrt(11.8125)));
  CHECK(von_mises(nh) == doctest::Approx(3.4369).epsilon(1e-4));

  std::mt19937 rng(8);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Mat3 a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = d(rng);
  const Mat3 dev = deviator(a + a.transpose());
  for (int k = 0; k < 10; ++k) {
    const Mat3 R =
        Eigen::AngleAxisd(3.0 * d(rng), Vec3(d(rng), d(rng), d(rng)).normalized()).toRotationMatrix();
    CHECK(von_mises(R * dev * R.transpose()) ==
          doctest::Approx(von_mises(dev)).epsilon(1e-12));
  }
}

TEST_CASE("pressure oscillation indicator") {
  const Mesh m = generate_cook_mesh(16);
  const auto nn = static_cast<Eigen::Index>(m.num_nodes());
  CHECK(pressure_oscillation_indicator(m, Vector::Constant(nn, 4.0)) < 1e-15);
  CHECK(pressure_oscillation_indicator(m, Vector::Zero(nn)) == 0.0);

  // Nodes are numbered row by row on a 17 x 17 grid.
  Vector checker(nn), linear(nn);
  for (Eigen::Index a = 0; a < nn; ++a) {
    checker(a) = ((a / 17 + a % 17) % 2 == 0) ? 1.0 : -1.0;
    const Vec3& x = m.nodes_current()[static_cast<std::size_t>(a)];
    linear(a) = 100.0 + x.x() - 0.5 * x.y();
  }
  CHECK(pressure_oscillation_indicator(m, checker) > 1.0);
  CHECK(pressure_oscillation_indicator(m, linear) <= 0.1);

  const auto nb = node_neighbours(m);
  CHECK(nb.size() == m.num_nodes());
  CHECK(nb[0].size() >= 2);
}
