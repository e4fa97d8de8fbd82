#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "fem_core.hpp"
#include "geometry.hpp"
#include "mesh.hpp"

namespace ofem {

// Closed-form reference solution with the derivatives needed by the error
// norms and diagnostics.
struct AnalyticSolution {
  std::function<Vec2(Vec2)> velocity;
  std::function<Mat2(Vec2)> velocity_gradient;  // (i,j) = d u_i / d x_j
  std::function<Vec2(Vec2)> velocity_laplacian;
  std::function<double(Vec2)> pressure;
  std::function<Vec2(Vec2)> pressure_gradient;
};

// Coefficients and data of the Oseen problem
//   -nu Lap(u) + (b.grad)u + sigma u + grad p = f,  div u = 0.
struct ProblemData {
  double nu = 1.0;
  std::function<Vec2(Vec2)> convection;   // b, assumed divergence-free
  std::function<double(Vec2)> reaction;   // sigma >= sigma0
  double sigma0 = 0.0;
  std::function<Vec2(Vec2)> body_force;   // f
  std::function<Vec2(Vec2)> neumann_data; // g (unused when no Neumann facet)
  std::function<Vec2(Vec2)> dirichlet_data;
  std::optional<AnalyticSolution> analytic;
};

enum class ParamRule { Oseen, NavierStokes };

struct StabilizationOptions {
  double c_delta = 0.5;
  double c_mu = 0.5;
  double c_inv = 1.0;
  int sigma_quad_degree = 6;
};

// Per-cell SUPG/PSPG (delta) and grad-div (mu) parameters.
struct StabilizationParams {
  PairKind kind = PairKind::InfSup;
  ParamRule rule = ParamRule::Oseen;
  double c_delta = 0.5, c_mu = 0.5, c_inv = 1.0;
  std::vector<double> delta;
  std::vector<double> mu;
  double max_delta = 0.0;
  double max_diameter = 0.0;  // global max h_K of the mesh
  double sigma_max = 0.0;     // quadrature-point max of sigma
  int admissibility_violations = 0;  // cells with delta_K above the admissible bound
};

// Oseen rule: inf-sup delta = c_delta h^2, mu = c_mu; equal-order
// delta = c_delta h if nu < h else c_delta h^2, mu = c_mu h.
// Navier-Stokes rule: delta = c_delta h^2 for both kinds, mu as above.
// The admissibility bound delta <= min{h^2/(8 c_inv nu), 1/(2 max sigma)} is
// counted per cell; violations are reported, not fatal.
StabilizationParams select_parameters(const Mesh& mesh, const SpacePair& space, double nu,
                                      const std::function<double(Vec2)>& sigma,
                                      ParamRule rule = ParamRule::Oseen,
                                      const StabilizationOptions& opts = {});

}  // namespace ofem
