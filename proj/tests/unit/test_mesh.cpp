#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "vmsolid/error.hpp"
#include "vmsolid/mesh.hpp"

using namespace vmsolid;

namespace {

Mesh unit_tet() {
  return Mesh(3, {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)},
              {{0, 1, 2, 3}}, {});
}

Mesh unit_triangle() {
  return Mesh(2, {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)}, {{0, 1, 2, -1}}, {});
}

std::vector<Vec3> uniform(const Mesh& m, const Vec3& v) {
  return std::vector<Vec3>(m.num_nodes(), v);
}

}  // namespace

TEST_CASE("cook mesh counts") {
  for (auto [n, nodes, elems] : {std::tuple{1, 4, 2}, {8, 81, 128}, {32, 1089, 2048}}) {
    const Mesh m = generate_cook_mesh(n);
    CHECK(m.dim() == 2);
    CHECK(m.num_nodes() == static_cast<std::size_t>(nodes));
    CHECK(m.num_elements() == static_cast<std::size_t>(elems));
    for (const char* tag : {"left", "right", "top", "bottom"}) CHECK(m.has_tag(tag));
  }
}

TEST_CASE("cook mesh area matches the trapezoid") {
  // Trapezoid with parallel sides 44 (x = 0) and 16 (x = 48).
  const double area = 0.5 * (44.0 + 16.0) * 48.0;
  CHECK(total_volume(generate_cook_mesh(16)) == doctest::Approx(area).epsilon(1e-12));
  CHECK(total_volume(generate_cook_mesh(16, 0.1)) ==
        doctest::Approx(0.01 * area).epsilon(1e-12));
}

TEST_CASE("box mesh counts and volume") {
  BoxSpec unit;
  Mesh m = generate_box_mesh(unit);
  CHECK(m.num_nodes() == 8);
  CHECK(m.num_elements() == 6);
  CHECK(total_volume(m) == doctest::Approx(1.0).epsilon(1e-12));

  BoxSpec beam;
  beam.extents = Vec3(1, 1, 6);
  beam.subdivisions = {2, 2, 12};
  m = generate_box_mesh(beam);
  CHECK(m.num_nodes() == 117);
  CHECK(m.num_elements() == 288);
  CHECK(total_volume(m) == doctest::Approx(6.0).epsilon(1e-12));

  BoxSpec block;
  block.extents = Vec3(14, 14, 10);
  block.subdivisions = {4, 4, 3};
  m = generate_box_mesh(block);
  CHECK(m.num_nodes() == 100);
  CHECK(m.num_elements() == 288);
  CHECK(total_volume(m) == doctest::Approx(1960.0).epsilon(1e-12));
  for (const char* tag : {"xmin", "xmax", "ymin", "ymax", "zmin", "zmax"})
    CHECK(m.has_tag(tag));
}

TEST_CASE("rotated box keeps its volume") {
  BoxSpec spec;
  spec.extents = Vec3(1, 6, 1);
  spec.subdivisions = {2, 12, 2};
  spec.rotation_axis = Vec3::UnitY();
  spec.rotation_deg = 5.2;
  const Mesh m = generate_box_mesh(spec);
  CHECK(total_volume(m) == doctest::Approx(6.0).epsilon(1e-12));
  for (std::size_t e = 0; e < m.num_elements(); ++e)
    CHECK(jacobian_to_reference(m, e) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("element geometry of the reference triangle") {
  const ElementGeometry g = element_geometry(unit_triangle(), 0);
  CHECK(g.volume == doctest::Approx(0.5));
  CHECK(g.gradients(0, 0) == doctest::Approx(-1.0));
  CHECK(g.gradients(1, 0) == doctest::Approx(-1.0));
  CHECK(g.gradients(0, 1) == doctest::Approx(1.0));
  CHECK(g.gradients(1, 1) == doctest::Approx(0.0));
  CHECK(g.gradients(0, 2) == doctest::Approx(0.0));
  CHECK(g.gradients(1, 2) == doctest::Approx(1.0));
  CHECK(g.h == doctest::Approx(1.0));
}

TEST_CASE("scaling a tetra halves gradients and multiplies volume by 8") {
  const Mesh m1 = unit_tet();
  Mesh m2(3, {Vec3(0, 0, 0), Vec3(2, 0, 0), Vec3(0, 2, 0), Vec3(0, 0, 2)}, {{0, 1, 2, 3}}, {});
  const ElementGeometry g1 = element_geometry(m1, 0);
  const ElementGeometry g2 = element_geometry(m2, 0);
  CHECK(g2.volume == doctest::Approx(8.0 * g1.volume));
  CHECK((g2.gradients - 0.5 * g1.gradients).norm() < 1e-15);
}

TEST_CASE("gradients sum to zero and reproduce linear fields") {
  const Mesh m = generate_cook_mesh(4);
  const Vec3 a(0.3, -1.7, 0.0);
  for (std::size_t e = 0; e < m.num_elements(); ++e) {
    const ElementGeometry g = element_geometry(m, e);
    CHECK(g.gradients.rowwise().sum().norm() < 1e-14);
    Vec3 grad = Vec3::Zero();
    int local = 0;
    for (int node : m.element(e))
      grad += (a.dot(m.nodes_current()[node]) + 2.5) * g.gradients.col(local++);
    CHECK((grad - a).norm() <= 1e-13 * a.norm());
  }
}

TEST_CASE("mesh orients clockwise elements") {
  Mesh m(2, {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)}, {{0, 2, 1, -1}}, {});
  CHECK(m.signed_volume(0) > 0.0);
}

TEST_CASE("degenerate and dangling input is rejected") {
  CHECK_THROWS_AS(Mesh(3, {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 0, 0), Vec3(0, 0, 1)},
                       {{0, 1, 2, 3}}, {}),
                  MeshError);
  CHECK_THROWS_AS(Mesh(2, {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)}, {{0, 1, 5, -1}}, {}),
                  MeshError);
}

TEST_CASE("move: identity, translation, round trip") {
  Mesh m = generate_cook_mesh(4);
  const auto before = m.nodes_current();
  m.move(uniform(m, Vec3::Zero()));
  CHECK(m.nodes_current() == before);

  std::vector<double> volumes;
  for (std::size_t e = 0; e < m.num_elements(); ++e) volumes.push_back(m.signed_volume(e));
  m.move(uniform(m, Vec3(1, 2, 0)));
  for (std::size_t e = 0; e < m.num_elements(); ++e)
    CHECK(m.signed_volume(e) == doctest::Approx(volumes[e]).epsilon(1e-12));
  CHECK(m.nodes_reference() == before);

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> d(-0.05, 0.05);
  Mesh r = generate_cook_mesh(4);
  std::vector<Vec3> delta(r.num_nodes());
  for (auto& v : delta) v = Vec3(d(rng), d(rng), 0.0);
  const auto start = r.nodes_current();
  r.move(delta);
  for (auto& v : delta) v = -v;
  r.move(delta);
  for (std::size_t a = 0; a < start.size(); ++a)
    CHECK((r.nodes_current()[a] - start[a]).norm() < 1e-14);
}

TEST_CASE("collapsing a tetra raises mesh inversion and leaves the mesh alone") {
  Mesh m = unit_tet();
  std::vector<Vec3> delta = uniform(m, Vec3::Zero());
  delta[3] = Vec3(0, 0, -1);  // onto the opposite face z = 0
  const auto before = m.nodes_current();
  try {
    m.move(delta);
    FAIL("expected MeshInversion");
  } catch (const MeshInversion& e) {
    CHECK(e.element() == 0);
  }
  CHECK(m.nodes_current() == before);
  CHECK_THROWS_AS(move_mesh(m, delta), MeshInversion);
}

TEST_CASE("jacobian to reference") {
  Mesh m = generate_cook_mesh(4);
  for (std::size_t e = 0; e < m.num_elements(); ++e)
    CHECK(jacobian_to_reference(m, e) == doctest::Approx(1.0).epsilon(1e-14));

  auto affine = [](const Mesh& mesh, const Mat3& A) {
    std::vector<Vec3> d;
    for (const Vec3& x : mesh.nodes_current()) d.push_back(A * x - x);
    return d;
  };
  Mat3 stretch = Mat3::Identity();
  stretch(0, 0) = 2.0;
  Mesh s = move_mesh(m, affine(m, stretch));
  Mat3 shear = Mat3::Identity();
  shear(0, 1) = 0.4;
  Mesh sh = move_mesh(m, affine(m, shear));
  Mesh both = move_mesh(s, affine(s, shear));
  for (std::size_t e = 0; e < m.num_elements(); ++e) {
    CHECK(jacobian_to_reference(s, e) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(jacobian_to_reference(sh, e) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(jacobian_to_reference(both, e) ==
          doctest::Approx(jacobian_to_reference(s, e) * jacobian_to_reference(sh, e))
              .epsilon(1e-12));
    CHECK((deformation_gradient(both, e) - shear * stretch).norm() < 1e-12);
  }
}
