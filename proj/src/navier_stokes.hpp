#pragma once

#include <vector>

#include "estimator.hpp"
#include "solver.hpp"

namespace ofem {

struct PicardConfig {
  double tolerance = 1e-10;  // Euclidean norm of the nonlinear algebraic residual
  int max_iterations = 100;
  bool stokes_initial_guess = true;
  double relaxation = 1.0;  // new iterate weight; 1 = undamped
  // Anderson mixing depth over the Picard steps.  Each iteration still solves
  // the frozen-convection Oseen system; the next iterate recombines the last
  // `anderson_depth` steps (least squares on the step residuals).  0 recovers
  // the plain (optionally relaxed) fixed-point iteration.
  int anderson_depth = 10;
};

class PicardError : public std::runtime_error {
 public:
  PicardError(const std::string& what, std::vector<double> history)
      : std::runtime_error(what), residual_history(std::move(history)) {}
  std::vector<double> residual_history;
};

struct PicardResult {
  DiscreteSolution solution;
  std::vector<double> residual_history;  // one entry per evaluated iterate
  int iterations = 0;
};

// Picard iteration for steady Navier-Stokes: each step assembles the Oseen
// operator with b := current velocity iterate (also inside the SUPG test
// function) and sigma = 0, then solves.  data.convection is ignored.
PicardResult picard_solve(const Mesh& mesh, const SpacePair& space, const ProblemData& data,
                          const StabilizationParams& params, const PicardConfig& config = {},
                          const AssemblyOptions& assembly = {}, const SolverOptions& solver = {});

// Oseen estimator with the nonlinear residual: b := u_h in r_K, in the SUPG
// component, and in the facet weight; sigma0 = 0 entries drop from the mins.
ErrorEstimate nse_estimate(const DiscreteSolution& solution, const ProblemData& data,
                           const StabilizationParams& params, const EstimatorOptions& opts = {});

// |(v,q)|_nse = (nu |grad v|^2 + nu |q|^2 + sum mu_K |div v|_K^2
//                + sum delta_K |grad q|_K^2)^{1/2} of the error; fills
// grad_sq, nu_pressure_sq, graddiv_sq, supg_sq (the grad-q term) and spg_nse.
NormReport spg_nse_norm(const DiscreteSolution& solution, const ProblemData& data,
                        const StabilizationParams& params, const EstimatorOptions& opts = {});

}  // namespace ofem
