#pragma once

#include <vector>

#include "assembly.hpp"
#include "problem.hpp"

namespace ofem {

// Residual-based estimator data (all entries are squared contributions).
struct ErrorEstimate {
  std::vector<double> cell_res_sq;        // weighted cell residual
  std::vector<double> cell_delta_sq;      // SUPG-weighted cell residual
  std::vector<double> cell_mu_sq;         // grad-div consistency
  std::vector<double> cell_div_share_sq;  // per-cell share of the global divergence term
  std::vector<double> facet_sq;           // per facet
  double res_sq = 0.0;
  double div_sq = 0.0;
  double facet_total_sq = 0.0;
  double delta_sq = 0.0;
  double mu_sq = 0.0;
  double eta = 0.0;

  double eta_sq() const { return res_sq + div_sq + facet_total_sq + delta_sq + mu_sq; }
};

// Error norm of (u - u_h, p - p_h) against the analytic solution.
struct NormReport {
  double grad_sq = 0.0;      // nu |grad e|^2
  double reaction_sq = 0.0;  // |sigma^{1/2} e|^2
  double graddiv_sq = 0.0;   // sum mu_K |div e|^2
  double supg_sq = 0.0;      // sum delta_K |(b.grad)e + grad e_p|^2
  double spg = 0.0;
  double pressure_l2_sq = 0.0;
  double omega_pres = 1.0;
  double spg_p = 0.0;
  // Navier-Stokes norm variant (filled by spg_nse_norm): there supg_sq holds
  // sum delta_K |grad e_p|^2 and nu_pressure_sq holds nu |e_p|^2.
  double nu_pressure_sq = 0.0;
  double spg_nse = 0.0;
};

struct HypothesisItem {
  double lhs = 0.0;
  double rhs = 0.0;
};

// Interpolation-error hypotheses and the trailing upper-bound diagnostics.
struct HypothesisReport {
  HypothesisItem l2_delta;        // sum delta^{-1} |u - Iu|_K^2        vs 2 |e|_spg^2
  HypothesisItem h1_delta;        // sum delta^alpha |grad(u - Iu)|_K^2 vs 2 |e|_spg^2
  HypothesisItem facet_b;         // sum_F |b|_F^2 |u - Iu|_F^2        vs 2 |e|_spg^2
  HypothesisItem supg_residual;   // sum delta |(b.grad)(u-Iu) + grad(p-Ip)|_K^2 vs 2 |e|_spg^2
  HypothesisItem pressure;        // |p - Ip| vs 2 |u - Iu| (equal-order) or 2 h^{-1} |u - Iu|
  double trailing_grad = 0.0;     // 16 sum delta c_inv^2 nu^2 h^{-2} |grad(u - Iu)|_K^2
  double trailing_lap = 0.0;      // 8 sum delta nu^2 |lap(u - Iu)|_K^2
};

struct EstimatorOptions {
  int quad_degree = 0;  // 0: 2*velocity_degree + 4
};

// Strong cell residual r_K = f + nu Lap u_h - (b.grad)u_h - sigma u_h - grad p_h
// at a physical point inside the cell.
Vec2 cell_residual(const DiscreteSolution& sol, const ProblemData& data, int cell, Vec2 point,
                   const DiscreteSolution* convection = nullptr);

// Facet residual at edge parameter t in [0,1] (walked from the lower to the
// higher global vertex id): stress jump on interior facets, Neumann defect on
// Neumann facets, zero on Dirichlet facets.
Vec2 facet_residual(const DiscreteSolution& sol, const ProblemData& data, int facet, double t);

// The five estimator components with C = 1 and their global aggregate.
ErrorEstimate estimate(const DiscreteSolution& sol, const ProblemData& data,
                       const StabilizationParams& params, const EstimatorOptions& opts = {},
                       const DiscreteSolution* convection = nullptr);

// Requires data.analytic.
NormReport spg_error_norm(const DiscreteSolution& sol, const ProblemData& data,
                          const StabilizationParams& params, const EstimatorOptions& opts = {});

// Requires data.analytic with gradients and Laplacians.
HypothesisReport hypothesis_diagnostics(const DiscreteSolution& sol, const ProblemData& data,
                                        const StabilizationParams& params,
                                        const EstimatorOptions& opts = {});

double effectivity(const ErrorEstimate& estimate, const NormReport& norm);

}  // namespace ofem
