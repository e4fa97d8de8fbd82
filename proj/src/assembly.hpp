#pragma once

#include <Eigen/Sparse>
#include <memory>
#include <string>
#include <vector>

#include "fem_core.hpp"
#include "mesh.hpp"
#include "problem.hpp"

namespace ofem {

// Coupled sparse system in the [u1 | u2 | p | multiplier] layout of DofMap.
struct LinearSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
  int n_velocity = 0;
  int n_pressure = 0;
  bool has_mean_constraint = false;

  int n_total() const { return static_cast<int>(matrix.rows()); }
};

struct DiscreteSolution {
  std::shared_ptr<const Mesh> mesh;
  std::shared_ptr<const DofMap> dofmap;
  SpacePair space;
  std::vector<double> velocity;  // [u1 block][u2 block]
  std::vector<double> pressure;
};

struct AssemblyOptions {
  int quad_degree = 0;  // 0: 2*velocity_degree + 2
};

// Assembles the stabilized Oseen operator
//   nu(grad u, grad v) + ((b.grad)u + sigma u, v) - (div v, p) + (div u, q)
//   + sum_K mu_K (div u, div v)_K
//   + sum_K delta_K (-nu Lap u + (b.grad)u + sigma u + grad p, (b.grad)v + grad q)_K
// and the load
//   (f, v) + sum_{Neumann F} (g, v)_F + sum_K delta_K (f, (b.grad)v + grad q)_K.
// When `convection` is given it overrides data.convection with the discrete
// velocity field (same mesh required); a null b means b = 0.
// If the dofmap carries the mean-pressure constraint, a final symmetric
// multiplier row/column enforcing the zero pressure mean is appended.
LinearSystem assemble(const Mesh& mesh, const DofMap& dofmap, const ProblemData& data,
                      const StabilizationParams& params, const AssemblyOptions& opts = {},
                      const DiscreteSolution* convection = nullptr);

// Replaces Dirichlet-constrained rows by identity rows with the interpolated
// boundary value on the RHS; column contributions are moved to the RHS.
void apply_dirichlet(LinearSystem& system, const DofMap& dofmap, const ProblemData& data);

// MatrixMarket coordinate dump of the matrix plus an array-format RHS
// (<prefix>.mtx and <prefix>_rhs.mtx).
void write_matrix_market(const LinearSystem& system, const std::string& prefix);

// Splits a full solution vector into a DiscreteSolution (multiplier dropped).
DiscreteSolution split_solution(std::shared_ptr<const Mesh> mesh,
                                std::shared_ptr<const DofMap> dofmap,
                                const Eigen::VectorXd& x);

}  // namespace ofem
