#include "benchmarks.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

#include "json.hpp"

namespace ofem {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class Poly {
 public:
  explicit Poly(std::vector<double> coeffs) : c_(std::move(coeffs)) {}

  double operator()(double x) const {
    double v = 0.0;
    for (std::size_t i = c_.size(); i-- > 0;) v = v * x + c_[i];
    return v;
  }

  Poly derivative() const {
    std::vector<double> d;
    for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * static_cast<double>(i));
    return Poly(std::move(d));
  }

 private:
  std::vector<double> c_;  // ascending powers
};

// u = curl(X(x) Y(y)) with X = 1000 x^2 (1-x)^4 and Y = y^3 (1-y)^2;
// p = pi^2 (x y^3 cos(2 pi x^2 y) - x^2 y sin(2 pi x y)) + 1/8.
AnalyticSolution smooth_solution() {
  const Poly X({0.0, 0.0, 1000.0, -4000.0, 6000.0, -4000.0, 1000.0});
  const Poly dX = X.derivative();
  const Poly d2X = dX.derivative();
  const Poly d3X = d2X.derivative();
  const Poly Y({0.0, 0.0, 0.0, 1.0, -2.0, 1.0});
  const Poly dY = Y.derivative();
  const Poly d2Y = dY.derivative();
  const Poly d3Y = d2Y.derivative();
  constexpr double pi = std::numbers::pi;

  AnalyticSolution s;
  s.velocity = [=](Vec2 p) { return Vec2{X(p.x) * dY(p.y), -dX(p.x) * Y(p.y)}; };
  s.velocity_gradient = [=](Vec2 p) {
    Mat2 g;
    g.m[0][0] = dX(p.x) * dY(p.y);
    g.m[0][1] = X(p.x) * d2Y(p.y);
    g.m[1][0] = -d2X(p.x) * Y(p.y);
    g.m[1][1] = -dX(p.x) * dY(p.y);
    return g;
  };
  s.velocity_laplacian = [=](Vec2 p) {
    return Vec2{d2X(p.x) * dY(p.y) + X(p.x) * d3Y(p.y),
                -(d3X(p.x) * Y(p.y) + dX(p.x) * d2Y(p.y))};
  };
  s.pressure = [=](Vec2 p) {
    const double a = 2.0 * pi * p.x * p.x * p.y;
    const double b = 2.0 * pi * p.x * p.y;
    return pi * pi * (p.x * p.y * p.y * p.y * std::cos(a) - p.x * p.x * p.y * std::sin(b)) +
           0.125;
  };
  s.pressure_gradient = [=](Vec2 p) {
    const double x = p.x, y = p.y;
    const double a = 2.0 * pi * x * x * y;
    const double b = 2.0 * pi * x * y;
    const double y3 = y * y * y;
    const double px = pi * pi *
                      (y3 * std::cos(a) - 4.0 * pi * x * x * y3 * y * std::sin(a) -
                       2.0 * x * y * std::sin(b) - 2.0 * pi * x * x * y * y * std::cos(b));
    const double py = pi * pi *
                      (3.0 * x * y * y * std::cos(a) - 2.0 * pi * x * x * x * y3 * std::sin(a) -
                       x * x * std::sin(b) - 2.0 * pi * x * x * x * y * std::cos(b));
    return Vec2{px, py};
  };
  return s;
}

// Value and first three derivatives of t^2 (1 - e^{lambda (t-1)})^2.
std::array<double, 4> layer_factor(double lambda, double t) {
  const double l = lambda;
  const double e = std::exp(l * (t - 1.0));
  const double w = 1.0 - e;
  const double a0 = t * t * w * w;
  const double a1 = 2.0 * t * w * w - 2.0 * l * t * t * e * w;
  const double a2 = 2.0 * w * w - 8.0 * l * t * e * w - 2.0 * l * l * t * t * e * (1.0 - 2.0 * e);
  const double a3 = -12.0 * l * e * w - 12.0 * l * l * t * e * (1.0 - 2.0 * e) -
                    2.0 * l * l * l * t * t * e * (1.0 - 4.0 * e);
  return {a0, a1, a2, a3};
}

AnalyticSolution layer_solution(double nu) {
  const double lambda = 0.5 / std::sqrt(nu);
  const double p_mean = (std::numbers::e - 1.0) * (std::numbers::e - 1.0);

  AnalyticSolution s;
  s.velocity = [=](Vec2 p) {
    const auto a = layer_factor(lambda, p.x);
    const auto b = layer_factor(lambda, p.y);
    return Vec2{a[0] * b[1], -a[1] * b[0]};
  };
  s.velocity_gradient = [=](Vec2 p) {
    const auto a = layer_factor(lambda, p.x);
    const auto b = layer_factor(lambda, p.y);
    Mat2 g;
    g.m[0][0] = a[1] * b[1];
    g.m[0][1] = a[0] * b[2];
    g.m[1][0] = -a[2] * b[0];
    g.m[1][1] = -a[1] * b[1];
    return g;
  };
  s.velocity_laplacian = [=](Vec2 p) {
    const auto a = layer_factor(lambda, p.x);
    const auto b = layer_factor(lambda, p.y);
    return Vec2{a[2] * b[1] + a[0] * b[3], -(a[3] * b[0] + a[1] * b[2])};
  };
  s.pressure = [=](Vec2 p) { return std::exp(p.x + p.y) - p_mean; };
  s.pressure_gradient = [](Vec2 p) {
    const double e = std::exp(p.x + p.y);
    return Vec2{e, e};
  };
  return s;
}

Vec2 convective_term(const Mat2& grad, Vec2 b) {
  return Vec2{grad.m[0][0] * b.x + grad.m[0][1] * b.y, grad.m[1][0] * b.x + grad.m[1][1] * b.y};
}

const std::vector<std::string>& all_pair_names() {
  static const std::vector<std::string> names = {"P1/P1", "P2/P1", "P2/P2", "P3/P2", "P3/P3"};
  return names;
}

std::string pair_tag(const SpacePair& pair) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "p%dp%d", pair.velocity_degree, pair.pressure_degree);
  return buf;
}

std::string nu_tag(double nu) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", nu);
  return buf;
}

std::string format_e(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12e", v);
  return buf;
}

void mark_failed(BenchRow& row, const std::string& what) {
  row.failed = true;
  row.error = what;
  row.err_spg = kNaN;
  row.eta = kNaN;
  row.eta_res = kNaN;
  row.eta_div = kNaN;
  row.eta_F = kNaN;
  row.eta_delta = kNaN;
  row.eta_mu = kNaN;
  row.effectivity = kNaN;
}

void fill_estimate(BenchRow& row, const ErrorEstimate& est) {
  row.eta = est.eta;
  row.eta_res = std::sqrt(est.res_sq);
  row.eta_div = std::sqrt(est.div_sq);
  row.eta_F = std::sqrt(est.facet_total_sq);
  row.eta_delta = std::sqrt(est.delta_sq);
  row.eta_mu = std::sqrt(est.mu_sq);
}

void attach_order(BenchRow& row, double prev_err, long prev_dofs, bool adaptive) {
  if (!(prev_err > 0.0) || !(row.err_spg > 0.0)) return;
  if (adaptive) {
    if (prev_dofs <= 0 || row.dofs <= prev_dofs) return;
    row.order = 2.0 * std::log(prev_err / row.err_spg) /
                std::log(static_cast<double>(row.dofs) / static_cast<double>(prev_dofs));
  } else {
    row.order = std::log2(prev_err / row.err_spg);
  }
  row.has_order = true;
}

struct SnapshotData {
  std::shared_ptr<const Mesh> mesh;
  DiscreteSolution solution;
  std::vector<double> indicators;
};

void write_snapshot(const std::string& path, const SnapshotData& snap) {
  const Mesh& mesh = *snap.mesh;
  const int nv = mesh.num_vertices();
  const int ns = snap.solution.dofmap->n_velocity();
  std::vector<double> u_mag(nv), pressure(nv);
  for (int v = 0; v < nv; ++v) {
    u_mag[v] = std::hypot(snap.solution.velocity[v], snap.solution.velocity[ns + v]);
    pressure[v] = snap.solution.pressure[v];
  }
  mesh.write_vtk(path, {{"indicator", snap.indicators}},
                 {{"velocity_magnitude", u_mag}, {"pressure", pressure}});
}

struct RunContext {
  const BenchmarkSpec& spec;
  AdaptiveLoopOptions opts;
  std::map<int, std::shared_ptr<Mesh>> mesh_cache;
  bool system_dumped = false;

  std::shared_ptr<Mesh> uniform_mesh(int level) {
    auto it = mesh_cache.find(level);
    if (it == mesh_cache.end())
      it = mesh_cache.emplace(level, std::make_shared<Mesh>(Mesh::unit_square(level))).first;
    return it->second;
  }

  void maybe_dump(const LinearSystem& sys) {
    if (!spec.dump_system || system_dumped || spec.out_dir.empty()) return;
    write_matrix_market(sys, spec.out_dir + "/system");
    system_dumped = true;
  }
};

BenchRow base_row(const BenchmarkSpec& spec, const SpacePair& pair, double nu, int level) {
  BenchRow row;
  row.problem = problem_name(spec.problem);
  row.pair = pair.name();
  row.nu = nu;
  row.level = level;
  return row;
}

void run_uniform_series(RunContext& ctx, const SpacePair& pair, double nu,
                        const ProblemData& data, std::vector<BenchRow>& rows,
                        std::optional<SnapshotData>& snapshot) {
  const BenchmarkSpec& spec = ctx.spec;
  const int levels = default_levels(spec, pair);
  double prev_err = 0.0;
  long prev_dofs = 0;
  for (int level = 1; level <= levels; ++level) {
    BenchRow row = base_row(spec, pair, nu, level);
    auto mesh = ctx.uniform_mesh(level);
    row.cells = mesh->num_cells();
    row.h_max = mesh->max_diameter();
    try {
      auto dofmap = std::make_shared<DofMap>(DofMap::build(*mesh, pair));
      row.dofs = dofmap->n_total();
      const StabilizationParams params = select_parameters(
          *mesh, pair, nu, data.reaction, ctx.opts.param_rule, ctx.opts.stabilization);
      row.admissibility_violations = params.admissibility_violations;

      DiscreteSolution sol;
      ErrorEstimate est;
      if (spec.problem == BenchProblem::NseSmooth) {
        PicardConfig picard;
        picard.tolerance = spec.picard_tol;
        picard.max_iterations = spec.picard_max_iterations;
        PicardResult result =
            picard_solve(*mesh, pair, data, params, picard, ctx.opts.assembly, ctx.opts.solver);
        sol = std::move(result.solution);
        row.picard_iterations = result.iterations;
        row.picard_history = std::move(result.residual_history);
        est = nse_estimate(sol, data, params, ctx.opts.estimator);
        const NormReport norm = spg_nse_norm(sol, data, params, ctx.opts.estimator);
        row.err_spg = norm.spg_nse;
      } else {
        LinearSystem sys = assemble(*mesh, *dofmap, data, params, ctx.opts.assembly);
        ctx.maybe_dump(sys);
        apply_dirichlet(sys, *dofmap, data);
        const SolveReport rep = solve(sys, ctx.opts.solver);
        sol = split_solution(mesh, dofmap, rep.x);
        est = estimate(sol, data, params, ctx.opts.estimator);
        const NormReport norm = spg_error_norm(sol, data, params, ctx.opts.estimator);
        row.err_spg = norm.spg;
        if (spec.problem == BenchProblem::OseenSmooth)
          row.hypotheses = hypothesis_diagnostics(sol, data, params, ctx.opts.estimator);
      }
      fill_estimate(row, est);
      row.effectivity = row.err_spg > 0.0 ? est.eta / row.err_spg : kNaN;
      if (spec.problem == BenchProblem::OseenLayer)
        row.strip_fraction = layer_strip_fraction(*mesh);
      attach_order(row, prev_err, prev_dofs, false);
      prev_err = row.err_spg;
      prev_dofs = row.dofs;
      if (spec.write_vtk && level == levels) {
        const ErrorEstimate est_copy = est;
        snapshot = SnapshotData{mesh, sol, local_indicators(*mesh, est_copy)};
      }
    } catch (const std::exception& e) {
      mark_failed(row, e.what());
      prev_err = 0.0;
      prev_dofs = 0;
    }
    rows.push_back(std::move(row));
  }
}

void run_adaptive_series(RunContext& ctx, const SpacePair& pair, double nu,
                         const ProblemData& data, std::vector<BenchRow>& rows,
                         std::optional<SnapshotData>& snapshot) {
  const BenchmarkSpec& spec = ctx.spec;
  const int rounds = default_levels(spec, pair);
  AdaptiveConfig config;
  config.strategy = spec.strategy;
  config.theta = spec.theta;
  config.max_levels = rounds;
  config.dof_budget = spec.dof_budget;
  try {
    const Mesh initial = Mesh::unit_square(spec.initial_level);
    const std::vector<AdaptiveStep> steps = adaptive_loop(initial, pair, data, config, ctx.opts);
    double prev_err = 0.0;
    long prev_dofs = 0;
    for (std::size_t i = 0; i < steps.size(); ++i) {
      const AdaptiveStep& step = steps[i];
      BenchRow row = base_row(spec, pair, nu, static_cast<int>(i));
      row.cells = step.mesh->num_cells();
      row.h_max = step.mesh->max_diameter();
      row.dofs = step.solution.dofmap->n_total();
      row.err_spg = step.norm ? step.norm->spg : kNaN;
      fill_estimate(row, step.estimate);
      row.effectivity = row.err_spg > 0.0 ? step.estimate.eta / row.err_spg : kNaN;
      if (spec.problem == BenchProblem::OseenLayer)
        row.strip_fraction = layer_strip_fraction(*step.mesh);
      attach_order(row, prev_err, prev_dofs, true);
      prev_err = row.err_spg;
      prev_dofs = row.dofs;
      if (spec.write_vtk && i + 1 == steps.size())
        snapshot = SnapshotData{step.mesh, step.solution,
                                local_indicators(*step.mesh, step.estimate)};
      rows.push_back(std::move(row));
    }
  } catch (const std::exception& e) {
    BenchRow row = base_row(spec, pair, nu, 0);
    mark_failed(row, e.what());
    rows.push_back(std::move(row));
  }
}

nlohmann::ordered_json hypotheses_json(const HypothesisReport& h) {
  auto item = [](const HypothesisItem& it) {
    return nlohmann::ordered_json{{"lhs", it.lhs}, {"rhs", it.rhs}};
  };
  nlohmann::ordered_json j;
  j["l2_delta"] = item(h.l2_delta);
  j["h1_delta"] = item(h.h1_delta);
  j["facet_b"] = item(h.facet_b);
  j["supg_residual"] = item(h.supg_residual);
  j["pressure"] = item(h.pressure);
  j["trailing_grad"] = h.trailing_grad;
  j["trailing_lap"] = h.trailing_lap;
  return j;
}

}  // namespace

ProblemData problem_oseen_smooth(double nu) {
  if (!(nu > 0.0)) throw std::invalid_argument("problem_oseen_smooth: nu must be positive");
  const AnalyticSolution sol = smooth_solution();
  ProblemData data;
  data.nu = nu;
  data.convection = sol.velocity;
  data.reaction = [](Vec2) { return 1.0; };
  data.sigma0 = 1.0;
  data.dirichlet_data = sol.velocity;
  data.body_force = [sol, nu](Vec2 x) {
    const Vec2 u = sol.velocity(x);
    const Vec2 lap = sol.velocity_laplacian(x);
    const Vec2 conv = convective_term(sol.velocity_gradient(x), u);
    const Vec2 gp = sol.pressure_gradient(x);
    return Vec2{-nu * lap.x + conv.x + u.x + gp.x, -nu * lap.y + conv.y + u.y + gp.y};
  };
  data.analytic = sol;
  return data;
}

ProblemData problem_oseen_layer(double nu) {
  if (!(nu > 0.0)) throw std::invalid_argument("problem_oseen_layer: nu must be positive");
  const AnalyticSolution sol = layer_solution(nu);
  ProblemData data;
  data.nu = nu;
  data.convection = [](Vec2) { return Vec2{1.0, 1.0}; };
  data.reaction = [](Vec2) { return 0.0; };
  data.sigma0 = 0.0;
  data.dirichlet_data = sol.velocity;
  data.body_force = [sol, nu](Vec2 x) {
    const Vec2 lap = sol.velocity_laplacian(x);
    const Vec2 conv = convective_term(sol.velocity_gradient(x), Vec2{1.0, 1.0});
    const Vec2 gp = sol.pressure_gradient(x);
    return Vec2{-nu * lap.x + conv.x + gp.x, -nu * lap.y + conv.y + gp.y};
  };
  data.analytic = sol;
  return data;
}

ProblemData problem_nse_smooth(double nu) {
  if (!(nu > 0.0)) throw std::invalid_argument("problem_nse_smooth: nu must be positive");
  const AnalyticSolution sol = smooth_solution();
  ProblemData data;
  data.nu = nu;
  data.convection = sol.velocity;
  data.reaction = [](Vec2) { return 0.0; };
  data.sigma0 = 0.0;
  data.dirichlet_data = sol.velocity;
  data.body_force = [sol, nu](Vec2 x) {
    const Vec2 u = sol.velocity(x);
    const Vec2 lap = sol.velocity_laplacian(x);
    const Vec2 conv = convective_term(sol.velocity_gradient(x), u);
    const Vec2 gp = sol.pressure_gradient(x);
    return Vec2{-nu * lap.x + conv.x + gp.x, -nu * lap.y + conv.y + gp.y};
  };
  data.analytic = sol;
  return data;
}

const char* problem_name(BenchProblem problem) {
  switch (problem) {
    case BenchProblem::OseenSmooth: return "oseen-smooth";
    case BenchProblem::OseenLayer: return "oseen-layer";
    case BenchProblem::NseSmooth: return "nse-smooth";
  }
  throw std::logic_error("problem_name: unknown problem");
}

BenchProblem parse_problem(const std::string& name) {
  if (name == "oseen-smooth") return BenchProblem::OseenSmooth;
  if (name == "oseen-layer") return BenchProblem::OseenLayer;
  if (name == "nse-smooth") return BenchProblem::NseSmooth;
  throw std::invalid_argument("unknown problem '" + name +
                              "' (expected oseen-smooth, oseen-layer or nse-smooth)");
}

ProblemData make_problem(BenchProblem problem, double nu) {
  switch (problem) {
    case BenchProblem::OseenSmooth: return problem_oseen_smooth(nu);
    case BenchProblem::OseenLayer: return problem_oseen_layer(nu);
    case BenchProblem::NseSmooth: return problem_nse_smooth(nu);
  }
  throw std::logic_error("make_problem: unknown problem");
}

double layer_strip_fraction(const Mesh& mesh) {
  int hit = 0;
  for (const auto& cell : mesh.cells) {
    bool in_strip = false;
    for (int v : cell)
      if (mesh.vertices[v].x > 0.9 || mesh.vertices[v].y > 0.9) in_strip = true;
    if (in_strip) ++hit;
  }
  return static_cast<double>(hit) / static_cast<double>(mesh.num_cells());
}

int default_levels(const BenchmarkSpec& spec, const SpacePair& pair) {
  if (spec.levels > 0) return spec.levels;
  if (spec.adaptive) return 8;
  const bool cubic = pair.velocity_degree >= 3;
  if (spec.problem == BenchProblem::NseSmooth) return cubic ? 4 : 5;
  return cubic ? 5 : 6;
}

std::string render_csv(const BenchmarkResult& result) {
  std::string out =
      "problem,pair,nu,level,dofs,err_spg,eta,eta_res,eta_div,eta_F,eta_delta,eta_mu,"
      "effectivity,order\n";
  for (const BenchRow& r : result.rows) {
    out += r.problem + ',' + r.pair + ',' + format_e(r.nu) + ',' + std::to_string(r.level) +
           ',' + std::to_string(r.dofs) + ',' + format_e(r.err_spg) + ',' + format_e(r.eta) +
           ',' + format_e(r.eta_res) + ',' + format_e(r.eta_div) + ',' + format_e(r.eta_F) +
           ',' + format_e(r.eta_delta) + ',' + format_e(r.eta_mu) + ',' +
           format_e(r.effectivity) + ',';
    if (r.has_order) out += format_e(r.order);
    out += '\n';
  }
  return out;
}

std::string render_json(const BenchmarkResult& result) {
  const BenchmarkSpec& spec = result.spec;
  nlohmann::ordered_json j;
  j["problem"] = problem_name(spec.problem);
  j["adaptive"] = spec.adaptive;
  if (spec.adaptive) {
    j["marking"] = spec.strategy == MarkingStrategy::Maximum ? "maximum" : "fixed-fraction";
    j["theta"] = spec.theta;
    j["initial_level"] = spec.initial_level;
  }
  j["quad_degree"] = spec.quad_degree;
  j["c_inv"] = spec.c_inv;
  j["solver_tol"] = spec.solver_tol;
  if (spec.problem == BenchProblem::NseSmooth) {
    j["picard_tol"] = spec.picard_tol;
    j["picard_max_iterations"] = spec.picard_max_iterations;
  }
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const BenchRow& r : result.rows) {
    nlohmann::ordered_json row;
    row["problem"] = r.problem;
    row["pair"] = r.pair;
    row["nu"] = r.nu;
    row["level"] = r.level;
    row["dofs"] = r.dofs;
    row["cells"] = r.cells;
    row["h_max"] = r.h_max;
    if (r.failed) {
      row["failed"] = true;
      row["error"] = r.error;
      rows.push_back(std::move(row));
      continue;
    }
    row["err_spg"] = r.err_spg;
    row["eta"] = r.eta;
    row["eta_res"] = r.eta_res;
    row["eta_div"] = r.eta_div;
    row["eta_F"] = r.eta_F;
    row["eta_delta"] = r.eta_delta;
    row["eta_mu"] = r.eta_mu;
    row["effectivity"] = r.effectivity;
    if (r.has_order) row["order"] = r.order;
    row["admissibility_violations"] = r.admissibility_violations;
    if (r.picard_iterations >= 0) {
      row["picard_iterations"] = r.picard_iterations;
      row["picard_residuals"] = r.picard_history;
    }
    if (r.strip_fraction >= 0.0) row["strip_fraction"] = r.strip_fraction;
    if (r.hypotheses) row["hypotheses"] = hypotheses_json(*r.hypotheses);
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

BenchmarkResult run_benchmark(const BenchmarkSpec& spec) {
  if (spec.adaptive && spec.problem == BenchProblem::NseSmooth)
    throw std::invalid_argument("adaptive runs are not supported for nse-smooth");

  BenchmarkResult result;
  result.spec = spec;

  std::vector<SpacePair> pairs = spec.pairs;
  if (pairs.empty())
    for (const std::string& name : all_pair_names()) pairs.push_back(SpacePair::parse(name));
  std::vector<double> nus = spec.nus;
  if (nus.empty()) {
    switch (spec.problem) {
      case BenchProblem::OseenSmooth: nus = {1e-3, 1e-4, 1e-5, 1e-6}; break;
      case BenchProblem::OseenLayer: nus = {1e-4, 1e-5, 1e-6}; break;
      case BenchProblem::NseSmooth: nus = {1.0 / 100.0, 1.0 / 400.0}; break;
    }
  }
  for (double nu : nus)
    if (!(nu > 0.0)) throw std::invalid_argument("run_benchmark: nu must be positive");

  RunContext ctx{spec, {}, {}, false};
  ctx.opts.param_rule =
      spec.problem == BenchProblem::NseSmooth ? ParamRule::NavierStokes : ParamRule::Oseen;
  ctx.opts.stabilization.c_inv = spec.c_inv;
  ctx.opts.assembly.quad_degree = spec.quad_degree;
  ctx.opts.solver.tolerance = spec.solver_tol;

  if (!spec.out_dir.empty()) std::filesystem::create_directories(spec.out_dir);

  for (const SpacePair& pair : pairs) {
    for (double nu : nus) {
      const ProblemData data = make_problem(spec.problem, nu);
      std::optional<SnapshotData> snapshot;
      if (spec.adaptive)
        run_adaptive_series(ctx, pair, nu, data, result.rows, snapshot);
      else
        run_uniform_series(ctx, pair, nu, data, result.rows, snapshot);
      if (snapshot && !spec.out_dir.empty()) {
        const std::string path = spec.out_dir + "/" + std::string(problem_name(spec.problem)) +
                                 "_" + pair_tag(pair) + "_nu" + nu_tag(nu) + ".vtk";
        write_snapshot(path, *snapshot);
      }
    }
  }

  if (!spec.out_dir.empty()) {
    std::ofstream csv(spec.out_dir + "/report.csv");
    csv << render_csv(result);
    std::ofstream json(spec.out_dir + "/report.json");
    json << render_json(result);
  }
  return result;
}

}  // namespace ofem
