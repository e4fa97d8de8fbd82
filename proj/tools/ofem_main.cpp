// Benchmark driver for the oseenfem library.  Talks to the core exclusively
// through the C interface.
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oseenfem/oseenfem.h"

namespace {

struct BenchArgs {
  std::vector<std::string> pairs;
  std::vector<double> nus;
  int levels = 0;
  bool adaptive = false;
  std::string marking = "fixed-fraction";
  double theta = 0.6;
  int initial_level = 3;
  std::string out;
  bool vtk = false;
  bool dump_system = false;
  int quad_degree = 0;
  double c_inv = 1.0;
  double solver_tol = 1e-12;
  long dof_budget = 300000;
  double picard_tol = 1e-10;
  int picard_max_iters = 250;
};

void add_bench_flags(CLI::App* cmd, BenchArgs& a, bool nonlinear) {
  cmd->add_option("--pair", a.pairs,
                  "Element pair (P1/P1, P2/P1, P2/P2, P3/P2, P3/P3); repeatable, default all");
  cmd->add_option("--nu", a.nus, "Viscosity coefficient; repeatable, default study grid");
  cmd->add_option("--levels", a.levels,
                  "Uniform refinement levels or adaptive rounds; 0 keeps per-pair defaults");
  if (!nonlinear) {
    cmd->add_flag("--adaptive", a.adaptive, "Estimator-driven adaptive refinement");
    cmd->add_option("--marking", a.marking, "Marking strategy")
        ->check(CLI::IsMember({"maximum", "fixed-fraction"}));
    cmd->add_option("--theta", a.theta, "Marking parameter in [0,1)");
    cmd->add_option("--initial-level", a.initial_level,
                    "Uniform refinements of the initial adaptive mesh");
  }
  cmd->add_option("--out", a.out, "Directory for report.csv / report.json");
  cmd->add_flag("--vtk", a.vtk, "Write a VTK snapshot of the finest solution per series");
  cmd->add_flag("--dump-system", a.dump_system,
                "Write the first assembled system in MatrixMarket format");
  cmd->add_option("--quad-degree", a.quad_degree, "Assembly quadrature degree override (1..12)");
  cmd->add_option("--c-inv", a.c_inv, "Inverse-inequality constant of the admissibility check");
  cmd->add_option("--solver-tol", a.solver_tol, "Relative residual bound of the direct solver");
  cmd->add_option("--dof-budget", a.dof_budget, "Stop refining once this many DoFs are reached");
  if (nonlinear) {
    cmd->add_option("--picard-tol", a.picard_tol, "Nonlinear residual tolerance");
    cmd->add_option("--picard-max-iters", a.picard_max_iters, "Picard iteration cap");
  }
  cmd->set_config("--config", "", "Key=value config file; command-line flags override");
}

ofem_benchmark* g_bench = nullptr;

void check(ofem_status status) {
  if (status == OFEM_OK) return;
  std::fprintf(stderr, "error: %s\n", ofem_last_error());
  ofem_benchmark_destroy(g_bench);
  std::exit(1);
}

int run_bench(const char* problem, const BenchArgs& a, bool nonlinear) {
  ofem_benchmark* bench = nullptr;
  check(ofem_benchmark_create(problem, &bench));
  g_bench = bench;
  for (const std::string& p : a.pairs) check(ofem_benchmark_add_pair(bench, p.c_str()));
  for (double nu : a.nus) check(ofem_benchmark_add_nu(bench, nu));
  check(ofem_benchmark_set_levels(bench, a.levels));
  if (!nonlinear)
    check(ofem_benchmark_set_adaptive(bench, a.adaptive ? 1 : 0, a.marking.c_str(), a.theta,
                                      a.initial_level));
  check(ofem_benchmark_set_output(bench, a.out.c_str(), a.vtk ? 1 : 0, a.dump_system ? 1 : 0));
  check(ofem_benchmark_set_numerics(bench, a.quad_degree, a.c_inv, a.solver_tol));
  check(ofem_benchmark_set_dof_budget(bench, a.dof_budget));
  if (nonlinear) check(ofem_benchmark_set_picard(bench, a.picard_tol, a.picard_max_iters));
  check(ofem_benchmark_run(bench));

  size_t count = 0;
  check(ofem_benchmark_row_count(bench, &count));
  std::printf("%-12s %-6s %-10s %5s %8s %14s %14s %12s %8s\n", "problem", "pair", "nu", "level",
              "dofs", "err_spg", "eta", "effectivity", "order");
  int failures = 0;
  for (size_t i = 0; i < count; ++i) {
    ofem_bench_row row;
    check(ofem_benchmark_get_row(bench, i, &row));
    if (row.failed) {
      ++failures;
      std::printf("%-12s %-6s %-10g %5d %8s failed: %s\n", row.problem, row.pair, row.nu,
                  row.level, "-", row.error);
      continue;
    }
    char order[16] = "-";
    if (row.has_order) std::snprintf(order, sizeof order, "%.3f", row.order);
    std::printf("%-12s %-6s %-10g %5d %8ld %14.6e %14.6e %12.4f %8s", row.problem, row.pair,
                row.nu, row.level, row.dofs, row.err_spg, row.eta, row.effectivity, order);
    if (row.picard_iterations >= 0) std::printf("  picard=%d", row.picard_iterations);
    std::printf("\n");
  }
  if (!a.out.empty())
    std::printf("\nreports: %s/report.csv, %s/report.json\n", a.out.c_str(), a.out.c_str());
  ofem_benchmark_destroy(bench);
  g_bench = nullptr;
  if (failures > 0) {
    std::fprintf(stderr, "%d of %zu rows failed\n", failures, count);
    return 2;
  }
  return 0;
}

int run_mesh_info(int levels, const std::vector<int>& bisect, const std::string& dump,
                  const std::string& vtk) {
  ofem_mesh* mesh = nullptr;
  auto fail = [&](ofem_status s) {
    if (s == OFEM_OK) return;
    std::fprintf(stderr, "error: %s\n", ofem_last_error());
    ofem_mesh_destroy(mesh);
    std::exit(1);
  };
  fail(ofem_mesh_create_unit_square(levels, &mesh));
  if (!bisect.empty()) {
    ofem_mesh* refined = nullptr;
    fail(ofem_mesh_bisect(mesh, bisect.data(), bisect.size(), &refined));
    ofem_mesh_destroy(mesh);
    mesh = refined;
  }
  ofem_mesh_info info;
  fail(ofem_mesh_get_info(mesh, &info));
  std::printf("vertices          %ld\n", info.vertices);
  std::printf("cells             %ld\n", info.cells);
  std::printf("facets            %ld\n", info.facets);
  std::printf("boundary_facets   %ld\n", info.boundary_facets);
  std::printf("max_diameter      %.12e\n", info.max_diameter);
  std::printf("min_diameter      %.12e\n", info.min_diameter);
  std::printf("total_area        %.12e\n", info.total_area);
  std::printf("shape_regularity  %.12e\n", info.shape_regularity);
  if (!dump.empty()) fail(ofem_mesh_write_dump(mesh, dump.c_str()));
  if (!vtk.empty()) fail(ofem_mesh_write_vtk(mesh, vtk.c_str()));
  ofem_mesh_destroy(mesh);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SUPG/PSPG/grad-div stabilized Oseen and Navier-Stokes benchmarks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ofem_version());

  BenchArgs smooth_args, layer_args, nse_args;
  CLI::App* smooth = app.add_subcommand(
      "oseen-smooth", "Oseen problem with a smooth manufactured solution, b = u, sigma = 1");
  add_bench_flags(smooth, smooth_args, false);
  CLI::App* layer = app.add_subcommand(
      "oseen-layer", "Oseen problem with boundary layers at the outflow, b = (1,1), sigma = 0");
  add_bench_flags(layer, layer_args, false);
  CLI::App* nse = app.add_subcommand(
      "nse-smooth", "Steady Navier-Stokes problem with the smooth manufactured solution");
  add_bench_flags(nse, nse_args, true);

  int mesh_levels = 0;
  std::vector<int> mesh_bisect;
  std::string mesh_dump, mesh_vtk;
  CLI::App* mesh_info = app.add_subcommand("mesh-info", "Inspect the structured unit-square mesh");
  mesh_info->add_option("--levels", mesh_levels, "Uniform refinement levels")
      ->check(CLI::NonNegativeNumber);
  mesh_info->add_option("--bisect", mesh_bisect,
                        "Cells to bisect (one newest-vertex round with closure)");
  mesh_info->add_option("--dump", mesh_dump, "Write a plain-text mesh dump to this path");
  mesh_info->add_option("--vtk", mesh_vtk, "Write the mesh in legacy VTK format to this path");

  CLI11_PARSE(app, argc, argv);

  if (smooth->parsed()) return run_bench("oseen-smooth", smooth_args, false);
  if (layer->parsed()) return run_bench("oseen-layer", layer_args, false);
  if (nse->parsed()) return run_bench("nse-smooth", nse_args, true);
  return run_mesh_info(mesh_levels, mesh_bisect, mesh_dump, mesh_vtk);
}
