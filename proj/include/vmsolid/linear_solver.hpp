#pragma once

#include "vmsolid/types.hpp"

namespace vmsolid {

struct LinearSolverConfig {
  enum class Kind { direct, iterative };
  Kind kind = Kind::direct;
  /// Relative residual target of the iterative path.
  double tol = 1e-10;
  int max_iter = 2000;
  int restart = 200;

  bool operator==(const LinearSolverConfig&) const = default;
};

/// Solves A x = b. Direct: sparse LU. Iterative: restarted GMRES with an
/// incomplete LU (threshold) preconditioner. Throws NumericalError on a
/// singular matrix or when the iterative solve misses its tolerance.
Vector solve_linear_system(const SparseMatrix& matrix, const Vector& rhs,
                           const LinearSolverConfig& config = {});

}  // namespace vmsolid
