#include "vmsolid/linear_solver.hpp"

#include <sstream>

#include <Eigen/SparseLU>
#include <unsupported/Eigen/IterativeSolvers>

#include "vmsolid/error.hpp"

namespace vmsolid {

namespace {

using ColMajor = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

Vector solve_direct(const ColMajor& a, const Vector& b) {
  Eigen::SparseLU<ColMajor, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(a);
  lu.factorize(a);
  if (lu.info() != Eigen::Success)
    throw NumericalError("sparse LU factorization failed: " + lu.lastErrorMessage());
  Vector x = lu.solve(b);
  if (lu.info() != Eigen::Success || !x.allFinite())
    throw NumericalError("sparse LU solve failed (singular matrix)");
  return x;
}

Vector solve_iterative(const ColMajor& a, const Vector& b,
                       const LinearSolverConfig& config) {
  Eigen::GMRES<ColMajor, Eigen::IncompleteLUT<double, int>> gmres;
  gmres.preconditioner().setDroptol(1e-6);
  gmres.preconditioner().setFillfactor(20);
  gmres.set_restart(config.restart);
  gmres.setTolerance(config.tol);
  gmres.setMaxIterations(config.max_iter);
  gmres.compute(a);
  if (gmres.info() != Eigen::Success)
    throw NumericalError("incomplete LU preconditioner failed");
  Vector x = gmres.solve(b);
  const double bn = b.norm();
  const double achieved = bn > 0.0 ? (a * x - b).norm() / bn : (a * x).norm();
  if (!x.allFinite() || achieved > config.tol * 10.0) {
    std::ostringstream msg;
    msg << "GMRES did not converge: relative residual " << achieved << " after "
        << gmres.iterations() << " iterations (tol " << config.tol << ")";
    throw NumericalError(msg.str());
  }
  return x;
}

}  // namespace

Vector solve_linear_system(const SparseMatrix& matrix, const Vector& rhs,
                           const LinearSolverConfig& config) {
  if (matrix.rows() != matrix.cols() || matrix.rows() != rhs.size())
    throw NumericalError("linear system has inconsistent dimensions");
  if (rhs.size() == 0) return Vector();
  const ColMajor a = matrix;
  if (config.kind == LinearSolverConfig::Kind::direct) return solve_direct(a, rhs);
  return solve_iterative(a, rhs, config);
}

}  // namespace vmsolid
