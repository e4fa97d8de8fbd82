#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

#include "assembly.hpp"

namespace ofem {

class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

struct SolveReport {
  Eigen::VectorXd x;
  double relative_residual = 0.0;
  int refinement_steps = 0;
  long factor_nonzeros = 0;
};

struct SolverOptions {
  double tolerance = 1e-12;  // on ||Ax-b|| / ||b||
  int max_refinement_steps = 3;
};

// Sparse LU with column reordering plus iterative refinement until the
// residual contract holds.  Throws SolverError when the factorization fails
// (singular/rank-deficient matrix) or the tolerance cannot be reached.
SolveReport solve(const LinearSystem& system, const SolverOptions& opts = {});

}  // namespace ofem
