#pragma once

#include <optional>
#include <vector>

#include "estimator.hpp"
#include "solver.hpp"

namespace ofem {

enum class MarkingStrategy { Maximum, FixedFraction };

struct AdaptiveConfig {
  MarkingStrategy strategy = MarkingStrategy::Maximum;
  double theta = 0.5;
  int max_levels = 30;
  long dof_budget = 200000;
};

// Squared local indicator of one cell: its cell terms, its share of the
// global divergence term, and an equal share of each adjacent facet term.
// Summing over all cells returns eta^2 exactly.
double local_indicator_sq(const Mesh& mesh, const ErrorEstimate& estimate, int cell);
std::vector<double> local_indicators(const Mesh& mesh, const ErrorEstimate& estimate);

// Maximum strategy: every cell with indicator >= theta * max indicator.
// Fixed fraction (Doerfler): smallest set, filled in descending indicator
// order, whose squared indicators sum to >= theta * total.
std::vector<int> mark(const std::vector<double>& indicators, const AdaptiveConfig& config);

struct AdaptiveStep {
  std::shared_ptr<const Mesh> mesh;
  DiscreteSolution solution;
  ErrorEstimate estimate;
  std::optional<NormReport> norm;  // when an analytic solution is available
  SolveReport solve_report;
};

struct AdaptiveLoopOptions {
  ParamRule param_rule = ParamRule::Oseen;
  StabilizationOptions stabilization;
  AssemblyOptions assembly;
  EstimatorOptions estimator;
  SolverOptions solver;
};

// solve -> estimate -> mark -> bisect, recording one step per mesh, until the
// DoF budget or the level cap stops the loop.
std::vector<AdaptiveStep> adaptive_loop(const Mesh& initial_mesh, const SpacePair& space,
                                        const ProblemData& data, const AdaptiveConfig& config,
                                        const AdaptiveLoopOptions& opts = {});

}  // namespace ofem
