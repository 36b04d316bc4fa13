#include <doctest.h>

#include <filesystem>
#include <sstream>
#include <string>

#include "vmsolid/error.hpp"
#include "vmsolid/io.hpp"

using namespace vmsolid;

namespace {

Mesh unit_tet() {
  return Mesh(3, {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)},
              {{0, 1, 2, 3}}, {});
}

std::string vtk(const VtkSnapshot& s) {
  std::ostringstream out;
  write_vtk(out, s);
  return out.str();
}

std::string drop_first_two_lines(const std::string& s) {
  const auto a = s.find('\n');
  return s.substr(s.find('\n', a + 1));
}

}  // namespace

TEST_CASE("VTK of a single tetra with zero fields") {
  const Mesh m = unit_tet();
  VtkSnapshot s;
  s.mesh = &m;
  s.displacement = Vector::Zero(12);
  s.pressure = Vector::Zero(4);
  s.von_mises = Vector::Zero(4);
  s.jacobian = Vector::Ones(1);
  s.density = Vector::Ones(1);
  const std::string text = vtk(s);
  CHECK(text.rfind("# vtk DataFile Version 3.0\n", 0) == 0);
  CHECK(text.find("POINTS 4 double\n") != std::string::npos);
  CHECK(text.find("CELLS 1 5\n4 0 1 2 3\n") != std::string::npos);
  CHECK(text.find("CELL_TYPES 1\n10\n") != std::string::npos);
  CHECK(text.find("VECTORS displacement double\n0 0 0\n0 0 0\n0 0 0\n0 0 0\n") !=
        std::string::npos);
}

TEST_CASE("VTK of an unchanged state differs only in the title") {
  const Mesh m = generate_cook_mesh(2);
  VtkSnapshot s;
  s.mesh = &m;
  s.displacement = Vector::LinSpaced(18, 0.0, 1.0);
  s.pressure = Vector::LinSpaced(9, -1.0, 1.0);
  s.time = 0.5;
  const std::string a = vtk(s);
  s.time = 1.25;
  const std::string b = vtk(s);
  CHECK(a != b);
  CHECK(drop_first_two_lines(a) == drop_first_two_lines(b));

  // 2D meshes are written as triangles with a zero z displacement.
  CHECK(a.find("CELL_TYPES 8\n5\n") != std::string::npos);
  CHECK(a.find("POINTS 9 double\n") != std::string::npos);
}

TEST_CASE("probe CSV") {
  ProbeSeries one("u_y", Vec3(48, 60, 0));
  one.append(0.0, 0.0);
  std::ostringstream out;
  write_probe_csv(out, one);
  CHECK(out.str() == "t,\"u_y@(48,60,0)\"\n0,0\n");

  ProbeSeries s("p", Vec3(0.1, 1.0 / 3.0, 0.7));
  for (int k = 1; k <= 50; ++k) s.append(0.01 * k, std::sin(0.37 * k) / 3.0);
  std::stringstream io;
  write_probe_csv(io, s);
  const ProbeSeries back = read_probe_csv(io);
  CHECK(back.field() == "p");
  CHECK(back.point() == s.point());
  CHECK(back.times() == s.times());
  CHECK(back.values() == s.values());

  CHECK_THROWS_AS(s.append(0.5, 1.0), ConfigError);
  CHECK_THROWS_AS(s.append(0.2, 1.0), ConfigError);
  CHECK_THROWS(write_probe_csv(out, ProbeSeries("u_x", Vec3::Zero())));

  std::istringstream bad("time,value\n0,1\n");
  CHECK_THROWS(read_probe_csv(bad));
  std::istringstream unquoted("t,u_x@(1,2,3)\n0,1\n0.5,2\n");
  CHECK(read_probe_csv(unquoted).size() == 2);
}

TEST_CASE("probe CSV file round trip") {
  const auto path = std::filesystem::temp_directory_path() / "vmsolid_probe_test.csv";
  ProbeSeries s("u_x", Vec3(1, 2, 3));
  s.append(0.0, 1e-300);
  s.append(1.0, -123.456789012345678);
  write_probe_csv_file(path.string(), s);
  const ProbeSeries back = read_probe_csv_file(path.string());
  CHECK(back.values() == s.values());
  std::filesystem::remove(path);
  CHECK_THROWS(read_probe_csv_file(path.string()));
}

TEST_CASE("CSV table") {
  std::ostringstream out;
  write_csv_table(out, {"n", "tip"}, {{"4", "6.1"}, {"8", "7.2"}});
  CHECK(out.str() == "n,tip\n4,6.1\n8,7.2\n");
}
