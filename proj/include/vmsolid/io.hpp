#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "vmsolid/mesh.hpp"
#include "vmsolid/types.hpp"

namespace vmsolid {

struct VtkSnapshot {
  const Mesh* mesh = nullptr;
  double time = 0.0;
  /// Nodal displacement (num_nodes * dim), pressure and Von Mises stress.
  Vector displacement;
  Vector pressure;
  Vector von_mises;
  /// Per element.
  Vector jacobian;
  Vector density;
};

/// Legacy ASCII VTK 3.0 unstructured grid on the current node positions.
/// The time stamp appears only in the title line.
void write_vtk(std::ostream& out, const VtkSnapshot& snapshot);
void write_vtk_file(const std::string& path, const VtkSnapshot& snapshot);

/// Time series of one probe. Rows must be appended with strictly increasing t.
class ProbeSeries {
 public:
  ProbeSeries() = default;
  ProbeSeries(std::string field, const Vec3& point);

  /// Throws ConfigError if t does not exceed the last time.
  void append(double t, double value);

  const std::string& field() const { return field_; }
  const Vec3& point() const { return point_; }
  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return times_.size(); }
  /// "<field>@(x,y,z)"
  std::string column_name() const;

 private:
  std::string field_;
  Vec3 point_ = Vec3::Zero();
  std::vector<double> times_;
  std::vector<double> values_;
};

/// Header `t,"<field>@(x,y,z)"`, then one row per sample at 17 digits.
void write_probe_csv(std::ostream& out, const ProbeSeries& series);
void write_probe_csv_file(const std::string& path, const ProbeSeries& series);
ProbeSeries read_probe_csv(std::istream& in);
ProbeSeries read_probe_csv_file(const std::string& path);

/// Comma-separated table with a header row.
void write_csv_table(std::ostream& out, const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows);

}  // namespace vmsolid
