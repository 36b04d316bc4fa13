#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace vmsolid {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Compressed-row sparse matrix used for all assembled systems.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;

}  // namespace vmsolid
