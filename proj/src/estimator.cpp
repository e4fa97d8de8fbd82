#include "estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fe_eval.hpp"

namespace ofem {

namespace {

Vec2 eval_or_zero(const std::function<Vec2(Vec2)>& f, Vec2 x) { return f ? f(x) : Vec2{}; }
double eval_or_zero(const std::function<double(Vec2)>& f, Vec2 x) { return f ? f(x) : 0.0; }

struct CellEval {
  const ReferenceElement& vel_el;
  const ReferenceElement& pre_el;
  std::vector<BasisPoint> vb, pb;

  CellEval(const SpacePair& space)
      : vel_el(ReferenceElement::get(space.velocity_degree)),
        pre_el(ReferenceElement::get(space.pressure_degree)) {}

  FieldAtPoint at(const DiscreteSolution& s, int cell, const CellGeometry& geo, Vec2 ref) {
    vel_el.eval(ref, vb);
    pre_el.eval(ref, pb);
    const Mat2 ginv = geo.jacobian.inverse();
    return eval_fields(s, cell, geo, ginv * ginv.transpose(), vb, pb);
  }
};

int default_quad_degree(const DiscreteSolution& sol, const EstimatorOptions& opts) {
  return opts.quad_degree > 0 ? opts.quad_degree : 2 * sol.space.velocity_degree + 4;
}

}  // namespace

Vec2 cell_residual(const DiscreteSolution& sol, const ProblemData& data, int cell, Vec2 point,
                   const DiscreteSolution* convection) {
  const CellGeometry geo = sol.mesh->cell_geometry(cell);
  const Vec2 ref = geo.unmap(point);
  CellEval ev(sol.space);
  const FieldAtPoint fh = ev.at(sol, cell, geo, ref);
  const Vec2 b = convection ? ev.at(*convection, cell, geo, ref).u : eval_or_zero(data.convection, point);
  const double sg = eval_or_zero(data.reaction, point);
  const Vec2 f = eval_or_zero(data.body_force, point);
  return {f.x + data.nu * fh.lap_u.x - b.dot({fh.grad_u.m[0][0], fh.grad_u.m[0][1]}) -
              sg * fh.u.x - fh.grad_p.x,
          f.y + data.nu * fh.lap_u.y - b.dot({fh.grad_u.m[1][0], fh.grad_u.m[1][1]}) -
              sg * fh.u.y - fh.grad_p.y};
}

namespace {

// (-nu grad u_h + p_h I) n evaluated from one side of a facet.
Vec2 side_stress(CellEval& ev, const DiscreteSolution& sol, double nu, int cell, Vec2 x, Vec2 n) {
  const CellGeometry geo = sol.mesh->cell_geometry(cell);
  const FieldAtPoint f = ev.at(sol, cell, geo, geo.unmap(x));
  const Vec2 grad_n{f.grad_u.m[0][0] * n.x + f.grad_u.m[0][1] * n.y,
                    f.grad_u.m[1][0] * n.x + f.grad_u.m[1][1] * n.y};
  return {-nu * grad_n.x + f.p * n.x, -nu * grad_n.y + f.p * n.y};
}

}  // namespace

Vec2 facet_residual(const DiscreteSolution& sol, const ProblemData& data, int facet, double t) {
  const Mesh& mesh = *sol.mesh;
  const Facet& f = mesh.facets[facet];
  if (f.is_boundary() && f.marker == FacetMarker::Dirichlet) return {};
  const Vec2 a = mesh.vertices[f.vertices[0]];
  const Vec2 b = mesh.vertices[f.vertices[1]];
  const Vec2 x = a + (b - a) * t;
  const Vec2 n = mesh.facet_normal(facet);
  CellEval ev(sol.space);
  if (f.is_boundary()) {
    // Neumann: g - (nu grad u_h - p_h I) n = g + side_stress
    const Vec2 g = eval_or_zero(data.neumann_data, x);
    const Vec2 s = side_stress(ev, sol, data.nu, f.cells[0], x, n);
    return {g.x + s.x, g.y + s.y};
  }
  const Vec2 s0 = side_stress(ev, sol, data.nu, f.cells[0], x, n);
  const Vec2 s1 = side_stress(ev, sol, data.nu, f.cells[1], x, n);
  return {s0.x - s1.x, s0.y - s1.y};
}

ErrorEstimate estimate(const DiscreteSolution& sol, const ProblemData& data,
                       const StabilizationParams& params, const EstimatorOptions& opts,
                       const DiscreteSolution* convection) {
  const Mesh& mesh = *sol.mesh;
  if (static_cast<int>(params.delta.size()) != mesh.num_cells())
    throw std::invalid_argument("estimate: params were built for a different mesh");
  const int nc = mesh.num_cells();
  const QuadratureRule quad = QuadratureRule::make(default_quad_degree(sol, opts));
  const ReferenceElement& vel_el = ReferenceElement::get(sol.space.velocity_degree);
  const ReferenceElement& pre_el = ReferenceElement::get(sol.space.pressure_degree);
  const BasisTable vtab = BasisTable::tabulate(vel_el, quad.points);
  const BasisTable ptab = BasisTable::tabulate(pre_el, quad.points);

  ErrorEstimate est;
  est.cell_res_sq.assign(nc, 0.0);
  est.cell_delta_sq.assign(nc, 0.0);
  est.cell_mu_sq.assign(nc, 0.0);
  est.cell_div_share_sq.assign(nc, 0.0);
  est.facet_sq.assign(mesh.num_facets(), 0.0);

  const double h_global = params.max_diameter;
  const bool alpha_one = params.kind == PairKind::EqualOrder && data.nu < h_global;

  std::vector<double> raw_res_sq(nc, 0.0), raw_div_sq(nc, 0.0);
  double div_total_sq = 0.0;

  for (int c = 0; c < nc; ++c) {
    const CellGeometry geo = mesh.cell_geometry(c);
    const Mat2 ginv = geo.jacobian.inverse();
    const Mat2 gg = ginv * ginv.transpose();
    for (std::size_t q = 0; q < quad.points.size(); ++q) {
      const double w = quad.weights[q] * geo.det;
      const Vec2 x = geo.map(quad.points[q]);
      const FieldAtPoint fh = eval_fields(sol, c, geo, gg, vtab.at[q], ptab.at[q]);
      const Vec2 b = convection
                         ? eval_fields(*convection, c, geo, gg, vtab.at[q], ptab.at[q], false).u
                         : eval_or_zero(data.convection, x);
      const double sg = eval_or_zero(data.reaction, x);
      const Vec2 f = eval_or_zero(data.body_force, x);
      const Vec2 r{f.x + data.nu * fh.lap_u.x - (b.x * fh.grad_u.m[0][0] + b.y * fh.grad_u.m[0][1]) -
                       sg * fh.u.x - fh.grad_p.x,
                   f.y + data.nu * fh.lap_u.y - (b.x * fh.grad_u.m[1][0] + b.y * fh.grad_u.m[1][1]) -
                       sg * fh.u.y - fh.grad_p.y};
      raw_res_sq[c] += w * (r.x * r.x + r.y * r.y);
      raw_div_sq[c] += w * fh.div_u * fh.div_u;
    }
    div_total_sq += raw_div_sq[c];

    const double h = geo.diameter;
    const double delta = params.delta[c];
    const double mu = params.mu[c];
    double res_w = std::min(h * h / data.nu, 40.0 * delta);
    if (data.sigma0 > 0.0) res_w = std::min(res_w, 1.0 / data.sigma0);
    est.cell_res_sq[c] = res_w * raw_res_sq[c];
    est.cell_delta_sq[c] = 40.0 * delta * raw_res_sq[c];
    const double d = 2.0;
    const double mu_w = std::min(40.0 * d * mu * mu / (alpha_one ? delta : 1.0), d * mu * mu / data.nu);
    est.cell_mu_sq[c] = mu_w * raw_div_sq[c];
    est.res_sq += est.cell_res_sq[c];
    est.delta_sq += est.cell_delta_sq[c];
    est.mu_sq += est.cell_mu_sq[c];
  }

  const double div_factor = params.kind == PairKind::EqualOrder
                                ? 160.0 * params.max_delta
                                : 160.0 * params.max_delta / (h_global * h_global);
  est.div_sq = div_factor * div_total_sq;
  if (div_total_sq > 0.0)
    for (int c = 0; c < nc; ++c)
      est.cell_div_share_sq[c] = est.div_sq * (raw_div_sq[c] / div_total_sq);

  // facet terms
  CellEval ev(sol.space);
  for (int fi = 0; fi < mesh.num_facets(); ++fi) {
    const Facet& f = mesh.facets[fi];
    if (f.is_boundary() && f.marker == FacetMarker::Dirichlet) continue;
    const Vec2 a = mesh.vertices[f.vertices[0]];
    const Vec2 bb = mesh.vertices[f.vertices[1]];
    const Vec2 n = mesh.facet_normal(fi);
    const double len = mesh.facet_length(fi);
    double r_sq = 0.0;
    double b_max = 0.0;
    for (std::size_t q = 0; q < quad.edge_points.size(); ++q) {
      const Vec2 x = a + (bb - a) * quad.edge_points[q];
      const double w = quad.edge_weights[q] * len;
      Vec2 r;
      if (f.is_boundary()) {
        const Vec2 g = eval_or_zero(data.neumann_data, x);
        const Vec2 s = side_stress(ev, sol, data.nu, f.cells[0], x, n);
        r = {g.x + s.x, g.y + s.y};
      } else {
        const Vec2 s0 = side_stress(ev, sol, data.nu, f.cells[0], x, n);
        const Vec2 s1 = side_stress(ev, sol, data.nu, f.cells[1], x, n);
        r = {s0.x - s1.x, s0.y - s1.y};
      }
      r_sq += w * (r.x * r.x + r.y * r.y);
      Vec2 bval;
      if (convection) {
        const int c0 = f.cells[0];
        const CellGeometry geo = mesh.cell_geometry(c0);
        bval = ev.at(*convection, c0, geo, geo.unmap(x)).u;
      } else {
        bval = eval_or_zero(data.convection, x);
      }
      b_max = std::max(b_max, bval.norm());
    }
    double h_K = mesh.cell_diameter(f.cells[0]);
    if (!f.is_boundary()) h_K = std::max(h_K, mesh.cell_diameter(f.cells[1]));
    double w_F = h_K / data.nu;
    if (data.sigma0 > 0.0) {
      w_F = std::min(w_F, 1.0 / (h_K * data.sigma0));
      w_F = std::min(w_F, 1.0 / std::sqrt(data.nu * data.sigma0));
    }
    if (b_max > 0.0) w_F = std::min(w_F, 40.0 / (b_max * b_max));
    est.facet_sq[fi] = w_F * r_sq;
    est.facet_total_sq += est.facet_sq[fi];
  }

  est.eta = std::sqrt(est.eta_sq());
  return est;
}

NormReport spg_error_norm(const DiscreteSolution& sol, const ProblemData& data,
                          const StabilizationParams& params, const EstimatorOptions& opts) {
  if (!data.analytic) throw std::invalid_argument("spg_error_norm: analytic solution required");
  const AnalyticSolution& ex = *data.analytic;
  const Mesh& mesh = *sol.mesh;
  const QuadratureRule quad = QuadratureRule::make(default_quad_degree(sol, opts));
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
      const Vec2 eu = ex.velocity(x) - fh.u;
      const Mat2 egrad = ex.velocity_gradient(x) - fh.grad_u;
      const double ep = ex.pressure(x) - fh.p;
      const Vec2 egp = ex.pressure_gradient(x) - fh.grad_p;
      const Vec2 b = eval_or_zero(data.convection, x);
      const double sg = eval_or_zero(data.reaction, x);
      const Vec2 conv{b.x * egrad.m[0][0] + b.y * egrad.m[0][1] + egp.x,
                      b.x * egrad.m[1][0] + b.y * egrad.m[1][1] + egp.y};
      nr.grad_sq += w * data.nu * egrad.frobenius_sq();
      nr.reaction_sq += w * sg * (eu.x * eu.x + eu.y * eu.y);
      nr.graddiv_sq += w * mu * egrad.trace() * egrad.trace();
      nr.supg_sq += w * delta * (conv.x * conv.x + conv.y * conv.y);
      nr.pressure_l2_sq += w * ep * ep;
    }
  }
  nr.spg = std::sqrt(nr.grad_sq + nr.reaction_sq + nr.graddiv_sq + nr.supg_sq);
  nr.omega_pres = std::max({1.0, 1.0 / std::sqrt(data.nu), std::sqrt(params.sigma_max)});
  nr.spg_p = std::sqrt(nr.spg * nr.spg + nr.pressure_l2_sq / (nr.omega_pres * nr.omega_pres));
  return nr;
}

HypothesisReport hypothesis_diagnostics(const DiscreteSolution& sol, const ProblemData& data,
                                        const StabilizationParams& params,
                                        const EstimatorOptions& opts) {
  if (!data.analytic || !data.analytic->velocity_gradient || !data.analytic->velocity_laplacian)
    throw std::invalid_argument("hypothesis_diagnostics: analytic derivatives required");
  const AnalyticSolution& ex = *data.analytic;
  const Mesh& mesh = *sol.mesh;
  const QuadratureRule quad = QuadratureRule::make(default_quad_degree(sol, opts));
  const BasisTable vtab =
      BasisTable::tabulate(ReferenceElement::get(sol.space.velocity_degree), quad.points);
  const BasisTable ptab =
      BasisTable::tabulate(ReferenceElement::get(sol.space.pressure_degree), quad.points);

  DiscreteSolution interp;
  interp.mesh = sol.mesh;
  interp.dofmap = sol.dofmap;
  interp.space = sol.space;
  interp.velocity = interpolate_velocity(sol.dofmap->velocity, ex.velocity);
  interp.pressure = interpolate_pressure(sol.dofmap->pressure, ex.pressure);

  const NormReport nr = spg_error_norm(sol, data, params, opts);
  const double rhs2 = 2.0 * nr.spg * nr.spg;

  HypothesisReport hr;
  hr.l2_delta.rhs = hr.h1_delta.rhs = hr.facet_b.rhs = hr.supg_residual.rhs = rhs2;
  const bool alpha_one = params.kind == PairKind::EqualOrder && data.nu < params.max_diameter;
  double u_l2_sq = 0.0, p_l2_sq = 0.0;

  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry geo = mesh.cell_geometry(c);
    const Mat2 ginv = geo.jacobian.inverse();
    const Mat2 gg = ginv * ginv.transpose();
    const double delta = params.delta[c];
    const double h = geo.diameter;
    for (std::size_t q = 0; q < quad.points.size(); ++q) {
      const double w = quad.weights[q] * geo.det;
      const Vec2 x = geo.map(quad.points[q]);
      const FieldAtPoint fi = eval_fields(interp, c, geo, gg, vtab.at[q], ptab.at[q]);
      const Vec2 eu = ex.velocity(x) - fi.u;
      const Mat2 egrad = ex.velocity_gradient(x) - fi.grad_u;
      const Vec2 elap = ex.velocity_laplacian(x) - fi.lap_u;
      const double ep = ex.pressure(x) - fi.p;
      const Vec2 egp = ex.pressure_gradient(x) - fi.grad_p;
      const Vec2 b = eval_or_zero(data.convection, x);
      const Vec2 conv{b.x * egrad.m[0][0] + b.y * egrad.m[0][1] + egp.x,
                      b.x * egrad.m[1][0] + b.y * egrad.m[1][1] + egp.y};
      const double eu_sq = eu.x * eu.x + eu.y * eu.y;
      hr.l2_delta.lhs += w * eu_sq / delta;
      hr.h1_delta.lhs += w * (alpha_one ? delta : 1.0) * egrad.frobenius_sq();
      hr.supg_residual.lhs += w * delta * (conv.x * conv.x + conv.y * conv.y);
      hr.trailing_grad += 16.0 * w * delta * params.c_inv * params.c_inv * data.nu * data.nu /
                          (h * h) * egrad.frobenius_sq();
      hr.trailing_lap += 8.0 * w * delta * data.nu * data.nu * (elap.x * elap.x + elap.y * elap.y);
      u_l2_sq += w * eu_sq;
      p_l2_sq += w * ep * ep;
    }
  }

  // facet hypothesis over all mesh facets
  const ReferenceElement& vel_el = ReferenceElement::get(sol.space.velocity_degree);
  std::vector<BasisPoint> vb;
  for (int fi = 0; fi < mesh.num_facets(); ++fi) {
    const Facet& f = mesh.facets[fi];
    const Vec2 a = mesh.vertices[f.vertices[0]];
    const Vec2 bpt = mesh.vertices[f.vertices[1]];
    const double len = mesh.facet_length(fi);
    const int c0 = f.cells[0];
    const CellGeometry geo = mesh.cell_geometry(c0);
    const Mat2 ginv = geo.jacobian.inverse();
    const Mat2 gg = ginv * ginv.transpose();
    double int_sq = 0.0, b_max = 0.0;
    for (std::size_t q = 0; q < quad.edge_points.size(); ++q) {
      const Vec2 x = a + (bpt - a) * quad.edge_points[q];
      vel_el.eval(geo.unmap(x), vb);
      const FieldAtPoint fint = eval_fields(interp, c0, geo, gg, vb, vb, false);
      const Vec2 eu = ex.velocity(x) - fint.u;
      int_sq += quad.edge_weights[q] * len * (eu.x * eu.x + eu.y * eu.y);
      b_max = std::max(b_max, eval_or_zero(data.convection, x).norm());
    }
    hr.facet_b.lhs += b_max * b_max * int_sq;
  }

  hr.pressure.lhs = std::sqrt(p_l2_sq);
  hr.pressure.rhs = params.kind == PairKind::EqualOrder
                        ? 2.0 * std::sqrt(u_l2_sq)
                        : 2.0 / params.max_diameter * std::sqrt(u_l2_sq);
  return hr;
}

double effectivity(const ErrorEstimate& est, const NormReport& norm) {
  if (!(norm.spg > 0.0)) throw std::invalid_argument("effectivity: zero error norm");
  return est.eta / norm.spg;
}

}  // namespace ofem
