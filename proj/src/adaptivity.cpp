#include "adaptivity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ofem {

double local_indicator_sq(const Mesh& mesh, const ErrorEstimate& est, int cell) {
  double v = est.cell_res_sq[cell] + est.cell_delta_sq[cell] + est.cell_mu_sq[cell] +
             est.cell_div_share_sq[cell];
  for (int f : mesh.cell_facets[cell]) {
    const int n_adjacent = mesh.facets[f].is_boundary() ? 1 : 2;
    v += est.facet_sq[f] / n_adjacent;
  }
  return v;
}

std::vector<double> local_indicators(const Mesh& mesh, const ErrorEstimate& est) {
  std::vector<double> ind(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) ind[c] = std::sqrt(local_indicator_sq(mesh, est, c));
  return ind;
}

std::vector<int> mark(const std::vector<double>& indicators, const AdaptiveConfig& config) {
  if (indicators.empty()) throw std::invalid_argument("mark: empty indicator list");
  if (!(config.theta >= 0.0 && config.theta < 1.0))
    throw std::invalid_argument("mark: theta must lie in [0,1)");
  std::vector<int> marked;
  if (config.strategy == MarkingStrategy::Maximum) {
    const double top = *std::max_element(indicators.begin(), indicators.end());
    const double cut = config.theta * top;
    for (int c = 0; c < static_cast<int>(indicators.size()); ++c)
      if (indicators[c] >= cut) marked.push_back(c);
    return marked;
  }
  // Doerfler: descending indicator order, ties by cell index.
  std::vector<int> order(indicators.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return indicators[a] > indicators[b]; });
  double total = 0.0;
  for (double v : indicators) total += v * v;
  double acc = 0.0;
  for (int c : order) {
    marked.push_back(c);
    acc += indicators[c] * indicators[c];
    if (acc >= config.theta * total) break;
  }
  std::sort(marked.begin(), marked.end());
  return marked;
}

std::vector<AdaptiveStep> adaptive_loop(const Mesh& initial_mesh, const SpacePair& space,
                                        const ProblemData& data, const AdaptiveConfig& config,
                                        const AdaptiveLoopOptions& opts) {
  std::vector<AdaptiveStep> history;
  auto mesh = std::make_shared<Mesh>(initial_mesh);
  for (int level = 0; level <= config.max_levels; ++level) {
    auto dofmap = std::make_shared<DofMap>(DofMap::build(*mesh, space));
    const StabilizationParams params = select_parameters(
        *mesh, space, data.nu, data.reaction, opts.param_rule, opts.stabilization);
    LinearSystem sys = assemble(*mesh, *dofmap, data, params, opts.assembly);
    apply_dirichlet(sys, *dofmap, data);
    AdaptiveStep step;
    step.solve_report = solve(sys, opts.solver);
    step.mesh = mesh;
    step.solution = split_solution(mesh, dofmap, step.solve_report.x);
    step.estimate = estimate(step.solution, data, params, opts.estimator);
    if (data.analytic) step.norm = spg_error_norm(step.solution, data, params, opts.estimator);
    history.push_back(std::move(step));

    if (level == config.max_levels) break;
    if (dofmap->n_total() >= config.dof_budget) break;
    const ErrorEstimate& est = history.back().estimate;
    if (!(est.eta > 0.0)) break;
    const std::vector<int> marked = mark(local_indicators(*mesh, est), config);
    if (marked.empty()) break;
    mesh = std::make_shared<Mesh>(mesh->bisect(marked));
  }
  return history;
}

}  // namespace ofem
