#pragma once

#include <optional>
#include <string>
#include <vector>

#include "adaptivity.hpp"
#include "navier_stokes.hpp"

namespace ofem {

// Convection-dominated Oseen problem on the unit square whose solution is the
// divergence-free curl of 1000 x^2 (1-x)^4 y^3 (1-y)^2 with a trigonometric
// pressure; b = u, sigma = 1.
ProblemData problem_oseen_smooth(double nu);

// Boundary-layer Oseen problem: u = curl of x^2 y^2 (1-e^{l(x-1)})^2
// (1-e^{l(y-1)})^2 with l = 0.5/sqrt(nu), p = e^{x+y} - (e-1)^2;
// b = (1,1), sigma = 0.
ProblemData problem_oseen_layer(double nu);

// Navier-Stokes version of the smooth problem: same (u, p), sigma = 0,
// f manufactured with the nonlinear convective term.
ProblemData problem_nse_smooth(double nu);

enum class BenchProblem { OseenSmooth, OseenLayer, NseSmooth };

const char* problem_name(BenchProblem problem);
BenchProblem parse_problem(const std::string& name);
ProblemData make_problem(BenchProblem problem, double nu);

struct BenchmarkSpec {
  BenchProblem problem = BenchProblem::OseenSmooth;
  std::vector<SpacePair> pairs;  // empty: all five pairs
  std::vector<double> nus;       // empty: per-problem default grid
  int levels = 0;                // uniform levels / adaptive rounds; 0: per-pair default
  bool adaptive = false;
  MarkingStrategy strategy = MarkingStrategy::FixedFraction;
  double theta = 0.6;
  int initial_level = 3;  // uniform refinements of the initial adaptive mesh
  std::string out_dir;    // empty: no files written
  bool write_vtk = false;
  bool dump_system = false;  // MatrixMarket dump of the first assembled system
  int quad_degree = 0;       // assembly override; 0 keeps the default
  double c_inv = 1.0;
  double solver_tol = 1e-12;
  long dof_budget = 300000;
  double picard_tol = 1e-10;
  // Study budget: the hardest convergent rows of the nu = 1/400 grid need
  // ~200 Anderson-mixed steps from a Stokes start; PicardConfig keeps its own
  // tighter default for library callers.
  int picard_max_iterations = 250;
};

struct BenchRow {
  std::string problem;
  std::string pair;
  double nu = 0.0;
  int level = 0;
  long dofs = 0;
  long cells = 0;
  double h_max = 0.0;
  double err_spg = 0.0;  // spg norm; spg,nse norm for the Navier-Stokes problem
  double eta = 0.0;
  double eta_res = 0.0;
  double eta_div = 0.0;
  double eta_F = 0.0;
  double eta_delta = 0.0;
  double eta_mu = 0.0;
  double effectivity = 0.0;
  double order = 0.0;  // vs h (uniform) or DoFs^{1/2} (adaptive); NaN on first level
  bool has_order = false;
  int admissibility_violations = 0;
  int picard_iterations = -1;  // Navier-Stokes rows only
  std::vector<double> picard_history;
  std::optional<HypothesisReport> hypotheses;  // smooth Oseen rows only
  double strip_fraction = -1.0;  // layer rows: cells touching the outflow strips
  bool failed = false;
  std::string error;
};

struct BenchmarkResult {
  BenchmarkSpec spec;
  std::vector<BenchRow> rows;
};

// Fraction of cells intersecting {x > 0.9} or {y > 0.9}.
double layer_strip_fraction(const Mesh& mesh);

// Default level count for a pair under this spec (fewer levels for cubic
// velocity spaces and for the nonlinear problem).
int default_levels(const BenchmarkSpec& spec, const SpacePair& pair);

std::string render_csv(const BenchmarkResult& result);
std::string render_json(const BenchmarkResult& result);

// Runs the full (pair, nu) study grid.  Solver and Picard failures are
// recorded on their row and the run continues.  With a nonempty out_dir,
// writes report.csv, report.json and optional VTK snapshots there.
BenchmarkResult run_benchmark(const BenchmarkSpec& spec);

}  // namespace ofem
