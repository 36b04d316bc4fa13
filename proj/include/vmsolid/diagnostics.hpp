#pragma once

#include "vmsolid/mesh.hpp"
#include "vmsolid/types.hpp"

namespace vmsolid {

/// sqrt(3/2 dev:dev) of a deviatoric stress.
double von_mises(const Mat3& dev_stress);

/// ||p - avg(p)|| / max(||p||, 1e-30), where avg(p) at a node is the mean of
/// its edge neighbours.
double pressure_oscillation_indicator(const Mesh& mesh, const Vector& p);

/// Node-to-node adjacency through element edges (sorted, without self).
std::vector<std::vector<int>> node_neighbours(const Mesh& mesh);

}  // namespace vmsolid
