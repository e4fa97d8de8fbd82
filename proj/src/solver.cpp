#include "solver.hpp"

#include <Eigen/SparseLU>
#include <cmath>

namespace ofem {

SolveReport solve(const LinearSystem& system, const SolverOptions& opts) {
  const auto& A = system.matrix;
  const auto& b = system.rhs;
  if (A.rows() != A.cols()) throw SolverError("solve: matrix is not square");
  if (A.rows() != b.size()) throw SolverError("solve: rhs size mismatch");
  if (!b.allFinite()) throw SolverError("solve: rhs has non-finite entries");

  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(A);
  lu.factorize(A);
  if (lu.info() != Eigen::Success)
    throw SolverError("solve: LU factorization failed (" + lu.lastErrorMessage() + ")");

  SolveReport rep;
  rep.x = lu.solve(b);
  if (lu.info() != Eigen::Success) throw SolverError("solve: triangular solve failed");
  rep.factor_nonzeros = static_cast<long>(lu.nnzL()) + static_cast<long>(lu.nnzU());

  const double bnorm = b.norm();
  const double denom = bnorm > 0.0 ? bnorm : 1.0;
  Eigen::VectorXd r = b - A * rep.x;
  rep.relative_residual = r.norm() / denom;
  while (rep.relative_residual > opts.tolerance && rep.refinement_steps < opts.max_refinement_steps) {
    const Eigen::VectorXd dx = lu.solve(r);
    if (lu.info() != Eigen::Success) break;
    rep.x += dx;
    ++rep.refinement_steps;
    r = b - A * rep.x;
    rep.relative_residual = r.norm() / denom;
  }
  if (!rep.x.allFinite())
    throw SolverError("solve: solution has non-finite entries (numerically singular system)");
  if (rep.relative_residual > opts.tolerance)
    throw SolverError("solve: residual contract not met, achieved " +
                      std::to_string(rep.relative_residual));
  return rep;
}

}  // namespace ofem
