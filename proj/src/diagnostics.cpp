#include "vmsolid/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "vmsolid/error.hpp"

namespace vmsolid {

double von_mises(const Mat3& s) {
  return std::sqrt(1.5 * s.cwiseProduct(s).sum());
}

std::vector<std::vector<int>> node_neighbours(const Mesh& mesh) {
  std::vector<std::vector<int>> adj(mesh.num_nodes());
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto nodes = mesh.element(e);
    for (int a : nodes)
      for (int b : nodes)
        if (a != b) adj[a].push_back(b);
  }
  for (auto& list : adj) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return adj;
}

double pressure_oscillation_indicator(const Mesh& mesh, const Vector& p) {
  if (p.size() != static_cast<Eigen::Index>(mesh.num_nodes()))
    throw ConfigError("pressure field size does not match the mesh");
  const auto adj = node_neighbours(mesh);
  Vector diff(p.size());
  for (Eigen::Index a = 0; a < p.size(); ++a) {
    const auto& nb = adj[a];
    if (nb.empty()) {
      diff(a) = 0.0;
      continue;
    }
    double avg = 0.0;
    for (int b : nb) avg += p(b);
    diff(a) = p(a) - avg / static_cast<double>(nb.size());
  }
  return diff.norm() / std::max(p.norm(), 1e-30);
}

}  // namespace vmsolid
