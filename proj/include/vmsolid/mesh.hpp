#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "vmsolid/types.hpp"

namespace vmsolid {

/// Simplex connectivity: 3 node ids in 2D, 4 in 3D. Unused trailing slots are -1.
using Element = std::array<int, 4>;

/// A boundary facet: 2 nodes (edge) in 2D, 3 nodes (triangle) in 3D.
struct BoundaryFacet {
  std::array<int, 3> nodes{-1, -1, -1};
  std::string tag;
};

/// Constant P1 data of one simplex.
struct ElementGeometry {
  /// Column a holds the gradient of the shape function of local node a.
  /// Rows beyond `dim` and columns beyond `dim + 1` are zero.
  Eigen::Matrix<double, 3, 4> gradients = Eigen::Matrix<double, 3, 4>::Zero();
  double volume = 0.0;
  /// Characteristic length (d! V)^(1/d).
  double h = 0.0;
  Vec3 centroid = Vec3::Zero();
};

/// Unstructured simplicial mesh carrying both the reference (X) and the
/// current (x) node positions. Points are stored as 3-vectors; z = 0 in 2D.
class Mesh {
 public:
  Mesh() = default;

  /// Builds a mesh, re-orienting elements to positive volume.
  /// Throws MeshError on degenerate elements or dangling facets.
  Mesh(int dim, std::vector<Vec3> nodes, std::vector<Element> elements,
       std::vector<BoundaryFacet> facets);

  int dim() const { return dim_; }
  int nodes_per_element() const { return dim_ + 1; }
  int nodes_per_facet() const { return dim_; }
  std::size_t num_nodes() const { return current_.size(); }
  std::size_t num_elements() const { return elements_.size(); }

  const std::vector<Vec3>& nodes_current() const { return current_; }
  const std::vector<Vec3>& nodes_reference() const { return reference_; }
  const std::vector<Element>& elements() const { return elements_; }
  const std::vector<BoundaryFacet>& boundary_facets() const { return facets_; }

  std::span<const int> element(std::size_t e) const {
    return {elements_[e].data(), static_cast<std::size_t>(dim_ + 1)};
  }

  bool has_tag(const std::string& tag) const;
  std::vector<std::string> tags() const;
  /// Sorted, unique node ids touched by facets with the given tag.
  std::vector<int> nodes_with_tag(const std::string& tag) const;

  /// Signed measure of element e in the current (or reference) configuration.
  double signed_volume(std::size_t e, bool reference = false) const;

  /// nodes_current += delta. All-or-nothing: throws MeshInversion (and leaves
  /// the mesh untouched) if any element volume becomes non-positive.
  void move(std::span<const Vec3> delta);

  /// Rigid rotation of both configurations about an axis through `center`.
  void rotate(const Vec3& axis, double angle_rad, const Vec3& center);

 private:
  int dim_ = 0;
  std::vector<Vec3> current_;
  std::vector<Vec3> reference_;
  std::vector<Element> elements_;
  std::vector<BoundaryFacet> facets_;
};

/// P1 geometry of element e in the current configuration.
/// Throws NumericalError("inverted element") for non-positive volume.
ElementGeometry element_geometry(const Mesh& mesh, std::size_t e);

/// Same, in the reference configuration.
ElementGeometry reference_element_geometry(const Mesh& mesh, std::size_t e);

/// Returns a copy of `mesh` with nodes_current += delta_u.
Mesh move_mesh(Mesh mesh, std::span<const Vec3> delta_u);

/// Current over reference element volume (det F of the affine map).
double jacobian_to_reference(const Mesh& mesh, std::size_t e);

/// Deformation gradient F = dx/dX of element e.
Mat3 deformation_gradient(const Mesh& mesh, std::size_t e);

/// Sum of element volumes in the current configuration.
double total_volume(const Mesh& mesh);

// --- generators ------------------------------------------------------------

/// Structured Cook's-membrane trapezoid (0,0),(48,44),(48,60),(0,44), scaled
/// by `scale`, with (n+1)^2 nodes and 2 n^2 triangles.
/// Tags: "left", "right", "top", "bottom".
Mesh generate_cook_mesh(int n, double scale = 1.0);

struct BoxSpec {
  int dim = 3;
  Vec3 extents = Vec3::Ones();
  std::array<int, 3> subdivisions{1, 1, 1};
  Vec3 origin = Vec3::Zero();
  /// Optional rigid rotation applied after generation.
  Vec3 rotation_axis = Vec3::UnitZ();
  double rotation_deg = 0.0;
  /// Rotation center, relative to origin.
  Vec3 rotation_center = Vec3::Zero();
};

/// Structured box: 2 triangles per cell in 2D, 6 tetrahedra (Kuhn split) per
/// cell in 3D. Tags "xmin","xmax","ymin","ymax" (and "zmin","zmax" in 3D).
Mesh generate_box_mesh(const BoxSpec& spec);

// --- import ----------------------------------------------------------------

/// Gmsh MSH 2.2 ASCII reader (element types 1, 2, 4; physical names as tags).
Mesh read_gmsh(std::istream& in);
Mesh read_gmsh_file(const std::string& path);

}  // namespace vmsolid
