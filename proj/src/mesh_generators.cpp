#include <cmath>
#include <numbers>

#include "vmsolid/error.hpp"
#include "vmsolid/mesh.hpp"

namespace vmsolid {

Mesh generate_cook_mesh(int n, double scale) {
  if (n < 1) throw ConfigError("cook mesh: n must be >= 1");
  if (!(scale > 0.0)) throw ConfigError("cook mesh: scale must be positive");

  const int np = n + 1;
  auto id = [np](int i, int j) { return j * np + i; };

  std::vector<Vec3> nodes;
  nodes.reserve(static_cast<std::size_t>(np) * np);
  for (int j = 0; j <= n; ++j) {
    const double eta = static_cast<double>(j) / n;
    for (int i = 0; i <= n; ++i) {
      const double xi = static_cast<double>(i) / n;
      const double y_bottom = 44.0 * xi;
      const double y_top = 44.0 + 16.0 * xi;
      nodes.emplace_back(scale * 48.0 * xi,
                         scale * (y_bottom + eta * (y_top - y_bottom)), 0.0);
    }
  }

  std::vector<Element> elements;
  elements.reserve(2 * static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1),
                d = id(i, j + 1);
      elements.push_back({a, b, c, -1});
      elements.push_back({a, c, d, -1});
    }

  std::vector<BoundaryFacet> facets;
  for (int k = 0; k < n; ++k) {
    facets.push_back({{id(0, k), id(0, k + 1), -1}, "left"});
    facets.push_back({{id(n, k), id(n, k + 1), -1}, "right"});
    facets.push_back({{id(k, 0), id(k + 1, 0), -1}, "bottom"});
    facets.push_back({{id(k, n), id(k + 1, n), -1}, "top"});
  }
  return Mesh(2, std::move(nodes), std::move(elements), std::move(facets));
}

namespace {

Mesh box_2d(const BoxSpec& s) {
  const int nx = s.subdivisions[0], ny = s.subdivisions[1];
  const int px = nx + 1;
  auto id = [px](int i, int j) { return j * px + i; };

  std::vector<Vec3> nodes;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      nodes.emplace_back(s.origin.x() + s.extents.x() * i / nx,
                         s.origin.y() + s.extents.y() * j / ny, 0.0);

  std::vector<Element> elements;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1),
                d = id(i, j + 1);
      elements.push_back({a, b, c, -1});
      elements.push_back({a, c, d, -1});
    }

  std::vector<BoundaryFacet> facets;
  for (int j = 0; j < ny; ++j) {
    facets.push_back({{id(0, j), id(0, j + 1), -1}, "xmin"});
    facets.push_back({{id(nx, j), id(nx, j + 1), -1}, "xmax"});
  }
  for (int i = 0; i < nx; ++i) {
    facets.push_back({{id(i, 0), id(i + 1, 0), -1}, "ymin"});
    facets.push_back({{id(i, ny), id(i + 1, ny), -1}, "ymax"});
  }
  return Mesh(2, std::move(nodes), std::move(elements), std::move(facets));
}

Mesh box_3d(const BoxSpec& s) {
  const int nx = s.subdivisions[0], ny = s.subdivisions[1],
            nz = s.subdivisions[2];
  const int px = nx + 1, py = ny + 1;
  auto id = [px, py](int i, int j, int k) { return (k * py + j) * px + i; };

  std::vector<Vec3> nodes;
  for (int k = 0; k <= nz; ++k)
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i)
        nodes.emplace_back(s.origin.x() + s.extents.x() * i / nx,
                           s.origin.y() + s.extents.y() * j / ny,
                           s.origin.z() + s.extents.z() * k / nz);

  // Kuhn split: one tetrahedron per axis permutation, all sharing the cell
  // diagonal from corner (0,0,0) to (1,1,1).
  static constexpr int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                      {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  std::vector<Element> elements;
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        for (const auto& p : perms) {
          int c[3] = {i, j, k};
          Element el{};
          el[0] = id(c[0], c[1], c[2]);
          for (int step = 0; step < 3; ++step) {
            ++c[p[step]];
            el[step + 1] = id(c[0], c[1], c[2]);
          }
          elements.push_back(el);
        }

  // Boundary faces: each cell face is split along the diagonal through the
  // cell's low corner, consistent with the Kuhn split.
  std::vector<BoundaryFacet> facets;
  auto add_quad = [&](int a, int b, int c, int d, const char* tag) {
    // a is the low corner, c the opposite corner.
    facets.push_back({{a, b, c}, tag});
    facets.push_back({{a, c, d}, tag});
  };
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j) {
      add_quad(id(0, j, k), id(0, j + 1, k), id(0, j + 1, k + 1), id(0, j, k + 1), "xmin");
      add_quad(id(nx, j, k), id(nx, j + 1, k), id(nx, j + 1, k + 1), id(nx, j, k + 1), "xmax");
    }
  for (int k = 0; k < nz; ++k)
    for (int i = 0; i < nx; ++i) {
      add_quad(id(i, 0, k), id(i + 1, 0, k), id(i + 1, 0, k + 1), id(i, 0, k + 1), "ymin");
      add_quad(id(i, ny, k), id(i + 1, ny, k), id(i + 1, ny, k + 1), id(i, ny, k + 1), "ymax");
    }
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      add_quad(id(i, j, 0), id(i + 1, j, 0), id(i + 1, j + 1, 0), id(i, j + 1, 0), "zmin");
      add_quad(id(i, j, nz), id(i + 1, j, nz), id(i + 1, j + 1, nz), id(i, j + 1, nz), "zmax");
    }
  return Mesh(3, std::move(nodes), std::move(elements), std::move(facets));
}

}  // namespace

Mesh generate_box_mesh(const BoxSpec& spec) {
  if (spec.dim != 2 && spec.dim != 3)
    throw ConfigError("box mesh: dim must be 2 or 3");
  for (int k = 0; k < spec.dim; ++k) {
    if (!(spec.extents[k] > 0.0))
      throw ConfigError("box mesh: extents must be positive");
    if (spec.subdivisions[k] < 1)
      throw ConfigError("box mesh: subdivisions must be positive");
  }
  Mesh mesh = spec.dim == 2 ? box_2d(spec) : box_3d(spec);
  if (spec.rotation_deg != 0.0)
    mesh.rotate(spec.rotation_axis, spec.rotation_deg * std::numbers::pi / 180.0,
                spec.origin + spec.rotation_center);
  return mesh;
}

}  // namespace vmsolid
