#include "vmsolid/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <utility>

#include "vmsolid/error.hpp"

namespace vmsolid {

namespace {

double simplex_signed_volume(int dim, const std::vector<Vec3>& x,
                             const Element& el) {
  if (dim == 2) {
    const Vec3 a = x[el[1]] - x[el[0]];
    const Vec3 b = x[el[2]] - x[el[0]];
    return 0.5 * (a.x() * b.y() - a.y() * b.x());
  }
  const Vec3 a = x[el[1]] - x[el[0]];
  const Vec3 b = x[el[2]] - x[el[0]];
  const Vec3 c = x[el[3]] - x[el[0]];
  return a.dot(b.cross(c)) / 6.0;
}

ElementGeometry geometry_from(int dim, const std::vector<Vec3>& x,
                              std::span<const int> nodes) {
  ElementGeometry g;
  const int nn = dim + 1;
  Eigen::Matrix3d edges = Eigen::Matrix3d::Identity();
  for (int k = 0; k < dim; ++k)
    edges.col(k).head(dim) = (x[nodes[k + 1]] - x[nodes[0]]).head(dim);

  double det = 0.0;
  Eigen::Matrix3d inv = Eigen::Matrix3d::Identity();
  if (dim == 2) {
    const Eigen::Matrix2d e2 = edges.topLeftCorner<2, 2>();
    det = e2.determinant();
    inv.topLeftCorner<2, 2>() = e2.inverse();
  } else {
    det = edges.determinant();
    inv = edges.inverse();
  }
  g.volume = det / (dim == 2 ? 2.0 : 6.0);
  if (!(g.volume > 0.0)) return g;

  // Rows of inv(edges) are the gradients of the barycentric coordinates 1..d.
  Vec3 sum = Vec3::Zero();
  for (int a = 1; a < nn; ++a) {
    Vec3 grad = Vec3::Zero();
    grad.head(dim) = inv.row(a - 1).head(dim).transpose();
    g.gradients.col(a) = grad;
    sum += grad;
  }
  g.gradients.col(0) = -sum;

  const double factorial = dim == 2 ? 2.0 : 6.0;
  g.h = std::pow(factorial * g.volume, 1.0 / dim);
  for (int a = 0; a < nn; ++a) g.centroid += x[nodes[a]];
  g.centroid /= nn;
  return g;
}

}  // namespace

Mesh::Mesh(int dim, std::vector<Vec3> nodes, std::vector<Element> elements,
           std::vector<BoundaryFacet> facets)
    : dim_(dim),
      current_(std::move(nodes)),
      elements_(std::move(elements)),
      facets_(std::move(facets)) {
  if (dim_ != 2 && dim_ != 3) throw MeshError("mesh dimension must be 2 or 3");
  const int nn = dim_ + 1;
  const int n_nodes = static_cast<int>(current_.size());
  for (auto& x : current_)
    if (dim_ == 2) x.z() = 0.0;

  for (std::size_t e = 0; e < elements_.size(); ++e) {
    auto& el = elements_[e];
    for (int a = 0; a < nn; ++a)
      if (el[a] < 0 || el[a] >= n_nodes)
        throw MeshError("element " + std::to_string(e) + " references missing node");
    if (dim_ == 2) el[3] = -1;
    double v = simplex_signed_volume(dim_, current_, el);
    if (v < 0.0) {
      std::swap(el[1], el[2]);
      v = -v;
    }
    // Relative threshold against the element's own edge lengths.
    double scale = 0.0;
    for (int a = 1; a < nn; ++a)
      scale = std::max(scale, (current_[el[a]] - current_[el[0]]).norm());
    if (!(v > 1e-14 * std::pow(scale, dim_)))
      throw MeshError("degenerate element " + std::to_string(e));
  }

  // Every boundary facet must belong to exactly one element.
  std::map<std::array<int, 3>, int> face_count;
  auto key_of = [&](std::array<int, 3> k, int count) {
    for (int i = count; i < 3; ++i) k[i] = -1;
    std::sort(k.begin(), k.begin() + count);
    return k;
  };
  for (const auto& el : elements_) {
    for (int skip = 0; skip < nn; ++skip) {
      std::array<int, 3> f{-1, -1, -1};
      int c = 0;
      for (int a = 0; a < nn; ++a)
        if (a != skip) f[c++] = el[a];
      ++face_count[key_of(f, dim_)];
    }
  }
  for (auto& f : facets_) {
    for (int i = dim_; i < 3; ++i) f.nodes[i] = -1;
    auto it = face_count.find(key_of(f.nodes, dim_));
    if (it == face_count.end() || it->second != 1)
      throw MeshError("boundary facet with tag '" + f.tag +
                      "' is not a face of exactly one element");
  }
  reference_ = current_;
}

bool Mesh::has_tag(const std::string& tag) const {
  return std::any_of(facets_.begin(), facets_.end(),
                     [&](const BoundaryFacet& f) { return f.tag == tag; });
}

std::vector<std::string> Mesh::tags() const {
  std::set<std::string> s;
  for (const auto& f : facets_) s.insert(f.tag);
  return {s.begin(), s.end()};
}

std::vector<int> Mesh::nodes_with_tag(const std::string& tag) const {
  std::vector<int> ids;
  for (const auto& f : facets_)
    if (f.tag == tag)
      for (int i = 0; i < dim_; ++i) ids.push_back(f.nodes[i]);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

double Mesh::signed_volume(std::size_t e, bool reference) const {
  return simplex_signed_volume(dim_, reference ? reference_ : current_,
                               elements_[e]);
}

void Mesh::move(std::span<const Vec3> delta) {
  if (delta.size() != current_.size())
    throw ConfigError("move: displacement size does not match node count");
  std::vector<Vec3> moved = current_;
  for (std::size_t i = 0; i < moved.size(); ++i) {
    moved[i] += delta[i];
    if (dim_ == 2) moved[i].z() = 0.0;
  }
  for (std::size_t e = 0; e < elements_.size(); ++e) {
    const double v = simplex_signed_volume(dim_, moved, elements_[e]);
    if (!(v > 0.0)) throw MeshInversion(e, v);
  }
  current_ = std::move(moved);
}

void Mesh::rotate(const Vec3& axis, double angle_rad, const Vec3& center) {
  const Eigen::AngleAxisd rot(angle_rad, axis.normalized());
  const Mat3 R = rot.toRotationMatrix();
  for (auto* pts : {&current_, &reference_})
    for (auto& x : *pts) {
      x = center + R * (x - center);
      if (dim_ == 2) x.z() = 0.0;
    }
}

ElementGeometry element_geometry(const Mesh& mesh, std::size_t e) {
  ElementGeometry g =
      geometry_from(mesh.dim(), mesh.nodes_current(), mesh.element(e));
  if (!(g.volume > 0.0))
    throw NumericalError("inverted element " + std::to_string(e));
  return g;
}

ElementGeometry reference_element_geometry(const Mesh& mesh, std::size_t e) {
  ElementGeometry g =
      geometry_from(mesh.dim(), mesh.nodes_reference(), mesh.element(e));
  if (!(g.volume > 0.0))
    throw NumericalError("inverted reference element " + std::to_string(e));
  return g;
}

Mesh move_mesh(Mesh mesh, std::span<const Vec3> delta_u) {
  mesh.move(delta_u);
  return mesh;
}

double jacobian_to_reference(const Mesh& mesh, std::size_t e) {
  return mesh.signed_volume(e) / mesh.signed_volume(e, true);
}

Mat3 deformation_gradient(const Mesh& mesh, std::size_t e) {
  const ElementGeometry g0 = reference_element_geometry(mesh, e);
  const auto nodes = mesh.element(e);
  Mat3 F = Mat3::Zero();
  for (int a = 0; a <= mesh.dim(); ++a)
    F += mesh.nodes_current()[nodes[a]] * g0.gradients.col(a).transpose();
  if (mesh.dim() == 2) F(2, 2) = 1.0;
  return F;
}

double total_volume(const Mesh& mesh) {
  double v = 0.0;
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) v += mesh.signed_volume(e);
  return v;
}

}  // namespace vmsolid
