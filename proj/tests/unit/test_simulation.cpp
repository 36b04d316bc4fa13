#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "vmsolid/cases.hpp"
#include "vmsolid/error.hpp"
#include "vmsolid/io.hpp"
#include "vmsolid/simulation.hpp"

using namespace vmsolid;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("vmsolid_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("point location") {
  const Mesh m = generate_cook_mesh(8);
  const PointLocation tip = locate_point(m, Vec3(48, 60, 0));
  int unit = 0;
  for (double w : tip.barycentric) unit += (w == 1.0);
  CHECK(unit == 1);

  const Vec3 inside(20.0, 35.0, 0.0);
  for (std::size_t start : {std::size_t{0}, m.num_elements() - 1}) {
    const PointLocation loc = locate_point(m, inside, start);
    double sum = 0.0;
    Vec3 x = Vec3::Zero();
    int local = 0;
    for (int node : m.element(loc.element)) {
      CHECK(loc.barycentric[local] >= -1e-12);
      sum += loc.barycentric[local];
      x += loc.barycentric[local++] * m.nodes_reference()[node];
    }
    CHECK(sum == doctest::Approx(1.0));
    CHECK((x - inside).norm() < 1e-12);

    // P1 interpolation is exact for linear fields.
    Vector f(static_cast<Eigen::Index>(m.num_nodes()));
    for (std::size_t a = 0; a < m.num_nodes(); ++a)
      f(a) = 2.0 * m.nodes_reference()[a].x() - m.nodes_reference()[a].y();
    CHECK(interpolate(m, loc, f) == doctest::Approx(2.0 * inside.x() - inside.y()));
  }
  CHECK_THROWS_AS(locate_point(m, Vec3(100, 0, 0)), ConfigError);

  BoxSpec cube;
  cube.subdivisions = {3, 3, 3};
  const Mesh c = generate_box_mesh(cube);
  const PointLocation loc = locate_point(c, Vec3(0.41, 0.52, 0.73));
  Vector z(static_cast<Eigen::Index>(c.num_nodes()));
  for (std::size_t a = 0; a < c.num_nodes(); ++a) z(a) = c.nodes_reference()[a].z();
  CHECK(interpolate(c, loc, z) == doctest::Approx(0.73));
}

TEST_CASE("steady Cook run writes its outputs") {
  CaseConfig c = preset("cook_static");
  apply_override(c, "mesh.n=8");
  const fs::path dir = scratch("cook_static");
  RunOptions opt;
  opt.out_dir = dir.string();
  opt.quiet = true;
  const RunResult r = run_case(c, opt);
  CHECK(r.report.exit_status == 0);
  CHECK(r.report.steps_completed == 1);
  REQUIRE(r.probes.size() == 1);
  CHECK(r.probes[0].size() == 1);
  CHECK(r.probes[0].values()[0] > 5.0);

  CHECK(fs::exists(dir / "cook_static.case"));
  CHECK(fs::exists(dir / "cook_static.log"));
  const fs::path csv = dir / "cook_static_probe_tip_a.csv";
  REQUIRE(fs::exists(csv));
  CHECK(read_probe_csv_file(csv.string()).values() == r.probes[0].values());
  int vtk = 0;
  for (const auto& e : fs::directory_iterator(dir)) vtk += e.path().extension() == ".vtk";
  CHECK(vtk >= 1);

  // The written case file reproduces the run.
  CHECK(parse_case_file((dir / "cook_static.case").string()).geometry.n == 8);
  fs::remove_all(dir);
}

TEST_CASE("transient probe file matches the in-memory history and runs are repeatable") {
  CaseConfig c = preset("cook_transient");
  apply_override(c, "mesh.n=4");
  apply_override(c, "time.t_end=0.2");
  const fs::path a = scratch("ct_a"), b = scratch("ct_b");
  RunOptions opt;
  opt.quiet = true;
  opt.out_dir = a.string();
  const RunResult ra = run_case(c, opt);
  opt.out_dir = b.string();
  run_case(c, opt);
  REQUIRE(ra.report.exit_status == 0);
  CHECK(ra.report.steps_completed == 20);
  CHECK(ra.report.steps_planned == 20);

  const ProbeSeries& p = ra.probes.at(0);
  CHECK(p.times().front() == 0.0);
  CHECK(p.times().back() == doctest::Approx(0.2));
  const fs::path name = "cook_transient_probe_tip_a.csv";
  const ProbeSeries back = read_probe_csv_file((a / name).string());
  CHECK(back.times() == p.times());
  CHECK(back.values() == p.values());
  CHECK(slurp(a / name) == slurp(b / name));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("a failing step ends the run with status 1") {
  CaseConfig c = preset("cook_transient");
  apply_override(c, "mesh.n=2");
  apply_override(c, "time.t_end=1");
  apply_override(c, "bc.load.value=(0, 1e6, 0)");
  std::ostringstream log;
  RunOptions opt;
  opt.log = &log;
  const RunResult r = run_case(c, opt);
  CHECK(r.report.exit_status == 1);
  CHECK(!r.report.error.empty());
  CHECK(r.report.steps_completed < r.report.steps_planned);
}

TEST_CASE("Von Mises field of a uniform stretch") {
  BoxSpec spec;
  spec.subdivisions = {2, 2, 2};
  const Mesh m = generate_box_mesh(spec);
  const Material mat = make_material(MaterialKind::linear_elastic, 3.0, 0.0, 1.0);
  Vector u = Vector::Zero(static_cast<Eigen::Index>(3 * m.num_nodes()));
  const double e = 1e-3;
  for (std::size_t a = 0; a < m.num_nodes(); ++a) u(3 * a) = e * m.nodes_current()[a].x();
  for (const Mat3& F : element_deformation_gradients(m, u)) CHECK(F(0, 0) == doctest::Approx(1 + e));
  // mu = 1.5: dev stress 2 mu dev(diag(e,0,0)) has Von Mises 2 mu e.
  const Vector vm = nodal_von_mises(m, mat, u);
  for (Eigen::Index a = 0; a < vm.size(); ++a) CHECK(vm(a) == doctest::Approx(3.0 * e));
}
