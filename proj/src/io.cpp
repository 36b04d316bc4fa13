#include "vmsolid/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "vmsolid/error.hpp"

namespace vmsolid {

namespace {

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << std::setprecision(17);
  return out;
}

void check_size(const Vector& v, std::size_t n, const char* what) {
  if (v.size() != 0 && v.size() != static_cast<Eigen::Index>(n))
    throw Error(std::string("VTK snapshot: ") + what + " has the wrong length");
}

void scalars(std::ostream& out, const char* name, const Vector& v, std::size_t n) {
  out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  for (std::size_t i = 0; i < n; ++i)
    out << (v.size() ? v(static_cast<Eigen::Index>(i)) : 0.0) << "\n";
}

std::string format_point(const Vec3& p) {
  std::ostringstream s;
  s << std::setprecision(17) << "(" << p.x() << "," << p.y() << "," << p.z() << ")";
  return s.str();
}

}  // namespace

void write_vtk(std::ostream& out, const VtkSnapshot& s) {
  if (!s.mesh) throw Error("VTK snapshot without a mesh");
  const Mesh& mesh = *s.mesh;
  const std::size_t nn = mesh.num_nodes(), ne = mesh.num_elements();
  const int dim = mesh.dim();
  check_size(s.displacement, nn * dim, "displacement");
  check_size(s.pressure, nn, "pressure");
  check_size(s.von_mises, nn, "von_mises");
  check_size(s.jacobian, ne, "J");
  check_size(s.density, ne, "density");

  const auto old_precision = out.precision(17);
  out << "# vtk DataFile Version 3.0\n";
  out << "vmsolid t=" << s.time << "\n";
  out << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << nn << " double\n";
  for (const auto& x : mesh.nodes_current()) out << x.x() << " " << x.y() << " " << x.z() << "\n";
  const int npe = dim + 1;
  out << "CELLS " << ne << " " << ne * (npe + 1) << "\n";
  for (std::size_t e = 0; e < ne; ++e) {
    out << npe;
    for (int a : mesh.element(e)) out << " " << a;
    out << "\n";
  }
  out << "CELL_TYPES " << ne << "\n";
  for (std::size_t e = 0; e < ne; ++e) out << (dim == 2 ? 5 : 10) << "\n";

  out << "POINT_DATA " << nn << "\n";
  out << "VECTORS displacement double\n";
  for (std::size_t a = 0; a < nn; ++a) {
    for (int i = 0; i < 3; ++i) {
      const double v = (i < dim && s.displacement.size())
                           ? s.displacement(static_cast<Eigen::Index>(a * dim + i))
                           : 0.0;
      out << (i ? " " : "") << v;
    }
    out << "\n";
  }
  scalars(out, "pressure", s.pressure, nn);
  scalars(out, "von_mises", s.von_mises, nn);
  out << "CELL_DATA " << ne << "\n";
  scalars(out, "J", s.jacobian, ne);
  scalars(out, "density", s.density, ne);
  out.precision(old_precision);
}

void write_vtk_file(const std::string& path, const VtkSnapshot& snapshot) {
  auto out = open_output(path);
  write_vtk(out, snapshot);
  if (!out) throw Error("failed writing '" + path + "'");
}

ProbeSeries::ProbeSeries(std::string field, const Vec3& point)
    : field_(std::move(field)), point_(point) {}

void ProbeSeries::append(double t, double value) {
  if (!times_.empty() && !(t > times_.back())) {
    std::ostringstream msg;
    msg << std::setprecision(17) << "probe " << column_name()
        << ": time " << t << " does not follow " << times_.back();
    throw ConfigError(msg.str());
  }
  times_.push_back(t);
  values_.push_back(value);
}

std::string ProbeSeries::column_name() const { return field_ + "@" + format_point(point_); }

void write_probe_csv(std::ostream& out, const ProbeSeries& series) {
  if (series.size() == 0) throw Error("probe series is empty");
  const auto old_precision = out.precision(17);
  // The name contains commas, so it is written as a quoted field.
  out << "t,\"" << series.column_name() << "\"\n";
  for (std::size_t i = 0; i < series.size(); ++i)
    out << series.times()[i] << "," << series.values()[i] << "\n";
  out.precision(old_precision);
}

void write_probe_csv_file(const std::string& path, const ProbeSeries& series) {
  auto out = open_output(path);
  write_probe_csv(out, series);
  if (!out) throw Error("failed writing '" + path + "'");
}

ProbeSeries read_probe_csv(std::istream& in) {
  std::string header;
  if (!std::getline(in, header) || header.rfind("t,", 0) != 0)
    throw Error("probe CSV: missing 't,<field>@(x,y,z)' header");
  std::string column = header.substr(2);
  if (column.size() >= 2 && column.front() == '"' && column.back() == '"')
    column = column.substr(1, column.size() - 2);
  const auto at = column.find("@(");
  if (at == std::string::npos || column.back() != ')')
    throw Error("probe CSV: malformed column name '" + column + "'");
  Vec3 p;
  {
    std::string coords = column.substr(at + 2, column.size() - at - 3);
    std::istringstream cs(coords);
    std::string item;
    for (int i = 0; i < 3; ++i) {
      if (!std::getline(cs, item, ',')) throw Error("probe CSV: malformed point");
      p[i] = std::stod(item);
    }
  }
  ProbeSeries series(column.substr(0, at), p);
  std::string line;
  int number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw Error("probe CSV line " + std::to_string(number) + ": expected 't,value'");
    series.append(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
  }
  return series;
}

ProbeSeries read_probe_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_probe_csv(in);
}

void write_csv_table(std::ostream& out, const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows) {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << "\n";
  };
  line(header);
  for (const auto& r : rows) line(r);
}

}  // namespace vmsolid
