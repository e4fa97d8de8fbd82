#include "navier_stokes.hpp"

#include <cmath>
#include <deque>
#include <memory>
#include <stdexcept>

#include "fe_eval.hpp"

namespace ofem {

PicardResult picard_solve(const Mesh& mesh_in, const SpacePair& space, const ProblemData& data,
                          const StabilizationParams& params, const PicardConfig& config,
                          const AssemblyOptions& assembly_opts, const SolverOptions& solver_opts) {
  if (!(config.tolerance > 0.0)) throw std::invalid_argument("picard_solve: tolerance must be positive");
  if (config.anderson_depth < 0)
    throw std::invalid_argument("picard_solve: anderson_depth must be >= 0");
  auto mesh = std::make_shared<Mesh>(mesh_in);
  auto dofmap = std::make_shared<DofMap>(DofMap::build(*mesh, space));

  ProblemData step_data = data;
  step_data.convection = nullptr;  // b comes from the iterate
  step_data.reaction = nullptr;
  step_data.sigma0 = 0.0;

  Eigen::VectorXd x = Eigen::VectorXd::Zero(dofmap->n_total());
  if (config.stokes_initial_guess) {
    LinearSystem stokes = assemble(*mesh, *dofmap, step_data, params, assembly_opts, nullptr);
    apply_dirichlet(stokes, *dofmap, step_data);
    x = solve(stokes, solver_opts).x;
  }

  const double beta = config.relaxation;
  std::deque<Eigen::VectorXd> step_x, step_f;  // iterate and residual increments
  Eigen::VectorXd x_prev, f_prev;

  PicardResult result;
  for (int it = 0; it < config.max_iterations; ++it) {
    const DiscreteSolution iterate = split_solution(mesh, dofmap, x);
    LinearSystem sys = assemble(*mesh, *dofmap, step_data, params, assembly_opts, &iterate);
    apply_dirichlet(sys, *dofmap, step_data);
    const double residual = (sys.rhs - sys.matrix * x).norm();
    result.residual_history.push_back(residual);
    if (residual < config.tolerance) {
      result.solution = iterate;
      result.iterations = it;
      return result;
    }
    const Eigen::VectorXd f = solve(sys, solver_opts).x - x;  // fixed-point step
    if (config.anderson_depth > 0 && it > 0) {
      step_x.push_back(x - x_prev);
      step_f.push_back(f - f_prev);
      if (static_cast<int>(step_x.size()) > config.anderson_depth) {
        step_x.pop_front();
        step_f.pop_front();
      }
    }
    x_prev = x;
    f_prev = f;
    if (step_f.empty()) {
      x += beta * f;
    } else {
      Eigen::MatrixXd df(f.size(), step_f.size());
      for (std::size_t j = 0; j < step_f.size(); ++j) df.col(j) = step_f[j];
      const Eigen::VectorXd gamma = df.colPivHouseholderQr().solve(f);
      x += beta * f;
      for (std::size_t j = 0; j < step_f.size(); ++j)
        x -= gamma[j] * (step_x[j] + beta * step_f[j]);
    }
  }
  throw PicardError("picard_solve: no convergence within " +
                        std::to_string(config.max_iterations) + " iterations (last residual " +
                        std::to_string(result.residual_history.back()) + ")",
                    result.residual_history);
}

ErrorEstimate nse_estimate(const DiscreteSolution& solution, const ProblemData& data,
                           const StabilizationParams& params, const EstimatorOptions& opts) {
  ProblemData nse_data = data;
  nse_data.convection = nullptr;
  nse_data.reaction = nullptr;
  nse_data.sigma0 = 0.0;
  return estimate(solution, nse_data, params, opts, &solution);
}

NormReport spg_nse_norm(const DiscreteSolution& sol, const ProblemData& data,
                        const StabilizationParams& params, const EstimatorOptions& opts) {
  if (!data.analytic) throw std::invalid_argument("spg_nse_norm: analytic solution required");
  const AnalyticSolution& ex = *data.analytic;
  const Mesh& mesh = *sol.mesh;
  const int quad_degree = opts.quad_degree > 0 ? opts.quad_degree : 2 * sol.space.velocity_degree + 4;
  const QuadratureRule quad = QuadratureRule::make(quad_degree);
  const BasisTable vtab =
      BasisTable::tabulate(ReferenceElement::get(sol.space.velocity_degree), quad.points);
  const BasisTable ptab =
      BasisTable::tabulate(ReferenceElement::get(sol.space.pressure_degree), quad.points);

  NormReport nr;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry geo = mesh.cell_geometry(c);
    const Mat2 ginv = geo.jacobian.inverse();
    const Mat2 gg = ginv * ginv.transpose();
    const double delta = params.delta[c];
    const double mu = params.mu[c];
    for (std::size_t q = 0; q < quad.points.size(); ++q) {
      const double w = quad.weights[q] * geo.det;
      const Vec2 x = geo.map(quad.points[q]);
      const FieldAtPoint fh = eval_fields(sol, c, geo, gg, vtab.at[q], ptab.at[q]);
      const Mat2 egrad = ex.velocity_gradient(x) - fh.grad_u;
      const double ep = ex.pressure(x) - fh.p;
      const Vec2 egp = ex.pressure_gradient(x) - fh.grad_p;
      nr.grad_sq += w * data.nu * egrad.frobenius_sq();
      nr.nu_pressure_sq += w * data.nu * ep * ep;
      nr.graddiv_sq += w * mu * egrad.trace() * egrad.trace();
      nr.supg_sq += w * delta * (egp.x * egp.x + egp.y * egp.y);
      nr.pressure_l2_sq += w * ep * ep;
    }
  }
  nr.spg_nse = std::sqrt(nr.grad_sq + nr.nu_pressure_sq + nr.graddiv_sq + nr.supg_sq);
  return nr;
}

}  // namespace ofem
