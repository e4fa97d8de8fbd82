#include "problem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ofem {

StabilizationParams select_parameters(const Mesh& mesh, const SpacePair& space, double nu,
                                      const std::function<double(Vec2)>& sigma,
                                      ParamRule rule, const StabilizationOptions& opts) {
  if (!(nu > 0.0)) throw std::invalid_argument("select_parameters: nu must be positive");
  StabilizationParams p;
  p.kind = space.kind;
  p.rule = rule;
  p.c_delta = opts.c_delta;
  p.c_mu = opts.c_mu;
  p.c_inv = opts.c_inv;

  const int nc = mesh.num_cells();
  p.delta.resize(nc);
  p.mu.resize(nc);

  if (sigma) {
    const QuadratureRule quad = QuadratureRule::make(opts.sigma_quad_degree);
    for (int c = 0; c < nc; ++c) {
      const CellGeometry g = mesh.cell_geometry(c);
      for (const Vec2& ref : quad.points) p.sigma_max = std::max(p.sigma_max, sigma(g.map(ref)));
    }
  }

  for (int c = 0; c < nc; ++c) {
    const double h = mesh.cell_diameter(c);
    p.max_diameter = std::max(p.max_diameter, h);
    double delta;
    if (rule == ParamRule::NavierStokes) {
      delta = opts.c_delta * h * h;
    } else if (space.kind == PairKind::InfSup) {
      delta = opts.c_delta * h * h;
    } else {
      delta = nu < h ? opts.c_delta * h : opts.c_delta * h * h;
    }
    p.delta[c] = delta;
    p.mu[c] = space.kind == PairKind::InfSup ? opts.c_mu : opts.c_mu * h;
    p.max_delta = std::max(p.max_delta, delta);

    double bound = h * h / (8.0 * opts.c_inv * nu);
    if (p.sigma_max > 0.0) bound = std::min(bound, 1.0 / (2.0 * p.sigma_max));
    if (delta > bound) ++p.admissibility_violations;
  }
  return p;
}

}  // namespace ofem
