#include "oseenfem/oseenfem.h"

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "benchmarks.hpp"
#include "solver.hpp"

struct ofem_mesh {
  ofem::Mesh mesh;
};

struct ofem_benchmark {
  ofem::BenchmarkSpec spec;
  ofem::BenchmarkResult result;
  std::string csv;
  std::string json;
  bool has_result = false;
};

namespace {

thread_local std::string g_last_error;

ofem_status classify(const std::exception& e) {
  const std::string what = e.what();
  if (dynamic_cast<const std::invalid_argument*>(&e)) return OFEM_ERR_INVALID_ARGUMENT;
  if (dynamic_cast<const ofem::SolverError*>(&e)) return OFEM_ERR_SOLVER;
  if (dynamic_cast<const ofem::PicardError*>(&e)) return OFEM_ERR_SOLVER;
  if (what.find("cannot open") != std::string::npos ||
      what.find("write failed") != std::string::npos)
    return OFEM_ERR_IO;
  return OFEM_ERR_INTERNAL;
}

template <typename F>
ofem_status guarded(F&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return classify(e);
  } catch (...) {
    g_last_error = "unknown error";
    return OFEM_ERR_INTERNAL;
  }
}

ofem_status fail_invalid(const char* message) {
  g_last_error = message;
  return OFEM_ERR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* ofem_version(void) { return "0.1.0"; }

const char* ofem_last_error(void) { return g_last_error.c_str(); }

ofem_status ofem_mesh_create_unit_square(int levels, ofem_mesh** out) {
  if (!out) return fail_invalid("ofem_mesh_create_unit_square: out is NULL");
  *out = nullptr;
  return guarded([&] {
    *out = new ofem_mesh{ofem::Mesh::unit_square(levels)};
    return OFEM_OK;
  });
}

ofem_status ofem_mesh_bisect(const ofem_mesh* mesh, const int* marked, size_t n_marked,
                             ofem_mesh** out) {
  if (!mesh || !out) return fail_invalid("ofem_mesh_bisect: NULL argument");
  if (n_marked > 0 && !marked) return fail_invalid("ofem_mesh_bisect: marked is NULL");
  *out = nullptr;
  return guarded([&] {
    const std::vector<int> cells(marked, marked + n_marked);
    *out = new ofem_mesh{mesh->mesh.bisect(cells)};
    return OFEM_OK;
  });
}

ofem_status ofem_mesh_get_info(const ofem_mesh* mesh, ofem_mesh_info* info) {
  if (!mesh || !info) return fail_invalid("ofem_mesh_get_info: NULL argument");
  return guarded([&] {
    const ofem::Mesh& m = mesh->mesh;
    info->vertices = m.num_vertices();
    info->cells = m.num_cells();
    info->facets = m.num_facets();
    info->boundary_facets = m.num_boundary_facets();
    info->max_diameter = m.max_diameter();
    info->min_diameter = m.min_diameter();
    info->total_area = m.total_area();
    info->shape_regularity = m.shape_regularity();
    return OFEM_OK;
  });
}

ofem_status ofem_mesh_write_vtk(const ofem_mesh* mesh, const char* path) {
  if (!mesh || !path) return fail_invalid("ofem_mesh_write_vtk: NULL argument");
  return guarded([&] {
    mesh->mesh.write_vtk(path);
    return OFEM_OK;
  });
}

ofem_status ofem_mesh_write_dump(const ofem_mesh* mesh, const char* path) {
  if (!mesh || !path) return fail_invalid("ofem_mesh_write_dump: NULL argument");
  return guarded([&] {
    mesh->mesh.write_dump(path);
    return OFEM_OK;
  });
}

void ofem_mesh_destroy(ofem_mesh* mesh) { delete mesh; }

ofem_status ofem_benchmark_create(const char* problem, ofem_benchmark** bench) {
  if (!problem || !bench) return fail_invalid("ofem_benchmark_create: NULL argument");
  *bench = nullptr;
  return guarded([&] {
    auto* b = new ofem_benchmark;
    b->spec.problem = ofem::parse_problem(problem);
    *bench = b;
    return OFEM_OK;
  });
}

ofem_status ofem_benchmark_add_pair(ofem_benchmark* bench, const char* pair) {
  if (!bench || !pair) return fail_invalid("ofem_benchmark_add_pair: NULL argument");
  return guarded([&] {
    bench->spec.pairs.push_back(ofem::SpacePair::parse(pair));
    return OFEM_OK;
  });
}

ofem_status ofem_benchmark_add_nu(ofem_benchmark* bench, double nu) {
  if (!bench) return fail_invalid("ofem_benchmark_add_nu: bench is NULL");
  if (!(nu > 0.0)) return fail_invalid("ofem_benchmark_add_nu: nu must be positive");
  bench->spec.nus.push_back(nu);
  return OFEM_OK;
}

ofem_status ofem_benchmark_set_levels(ofem_benchmark* bench, int levels) {
  if (!bench) return fail_invalid("ofem_benchmark_set_levels: bench is NULL");
  if (levels < 0) return fail_invalid("ofem_benchmark_set_levels: levels must be >= 0");
  bench->spec.levels = levels;
  return OFEM_OK;
}

ofem_status ofem_benchmark_set_adaptive(ofem_benchmark* bench, int adaptive, const char* marking,
                                        double theta, int initial_level) {
  if (!bench) return fail_invalid("ofem_benchmark_set_adaptive: bench is NULL");
  if (!(theta >= 0.0 && theta < 1.0))
    return fail_invalid("ofem_benchmark_set_adaptive: theta must lie in [0,1)");
  if (initial_level < 0)
    return fail_invalid("ofem_benchmark_set_adaptive: initial_level must be >= 0");
  ofem::MarkingStrategy strategy = ofem::MarkingStrategy::FixedFraction;
  if (marking && *marking) {
    if (std::strcmp(marking, "maximum") == 0)
      strategy = ofem::MarkingStrategy::Maximum;
    else if (std::strcmp(marking, "fixed-fraction") == 0)
      strategy = ofem::MarkingStrategy::FixedFraction;
    else
      return fail_invalid("ofem_benchmark_set_adaptive: unknown marking strategy");
  }
  bench->spec.adaptive = adaptive != 0;
  bench->spec.strategy = strategy;
  bench->spec.theta = theta;
  bench->spec.initial_level = initial_level;
  return OFEM_OK;
}

ofem_status ofem_benchmark_set_output(ofem_benchmark* bench, const char* out_dir, int write_vtk,
                                      int dump_system) {
  if (!bench) return fail_invalid("ofem_benchmark_set_output: bench is NULL");
  bench->spec.out_dir = out_dir ? out_dir : "";
  bench->spec.write_vtk = write_vtk != 0;
  bench->spec.dump_system = dump_system != 0;
  return OFEM_OK;
}

ofem_status ofem_benchmark_set_numerics(ofem_benchmark* bench, int quad_degree, double c_inv,
                                        double solver_tol) {
  if (!bench) return fail_invalid("ofem_benchmark_set_numerics: bench is NULL");
  if (quad_degree != 0 && (quad_degree < 1 || quad_degree > 12))
    return fail_invalid("ofem_benchmark_set_numerics: quad_degree must be 0 or in [1,12]");
  if (!(c_inv > 0.0)) return fail_invalid("ofem_benchmark_set_numerics: c_inv must be positive");
  if (!(solver_tol > 0.0))
    return fail_invalid("ofem_benchmark_set_numerics: solver_tol must be positive");
  bench->spec.quad_degree = quad_degree;
  bench->spec.c_inv = c_inv;
  bench->spec.solver_tol = solver_tol;
  return OFEM_OK;
}

ofem_status ofem_benchmark_set_dof_budget(ofem_benchmark* bench, long budget) {
  if (!bench) return fail_invalid("ofem_benchmark_set_dof_budget: bench is NULL");
  if (budget <= 0) return fail_invalid("ofem_benchmark_set_dof_budget: budget must be positive");
  bench->spec.dof_budget = budget;
  return OFEM_OK;
}

ofem_status ofem_benchmark_set_picard(ofem_benchmark* bench, double tolerance,
                                      int max_iterations) {
  if (!bench) return fail_invalid("ofem_benchmark_set_picard: bench is NULL");
  if (!(tolerance > 0.0))
    return fail_invalid("ofem_benchmark_set_picard: tolerance must be positive");
  if (max_iterations < 1)
    return fail_invalid("ofem_benchmark_set_picard: max_iterations must be >= 1");
  bench->spec.picard_tol = tolerance;
  bench->spec.picard_max_iterations = max_iterations;
  return OFEM_OK;
}

ofem_status ofem_benchmark_run(ofem_benchmark* bench) {
  if (!bench) return fail_invalid("ofem_benchmark_run: bench is NULL");
  return guarded([&] {
    bench->result = ofem::run_benchmark(bench->spec);
    bench->csv = ofem::render_csv(bench->result);
    bench->json = ofem::render_json(bench->result);
    bench->has_result = true;
    return OFEM_OK;
  });
}

ofem_status ofem_benchmark_row_count(const ofem_benchmark* bench, size_t* count) {
  if (!bench || !count) return fail_invalid("ofem_benchmark_row_count: NULL argument");
  if (!bench->has_result) return fail_invalid("ofem_benchmark_row_count: run the benchmark first");
  *count = bench->result.rows.size();
  return OFEM_OK;
}

ofem_status ofem_benchmark_get_row(const ofem_benchmark* bench, size_t index,
                                   ofem_bench_row* row) {
  if (!bench || !row) return fail_invalid("ofem_benchmark_get_row: NULL argument");
  if (!bench->has_result) return fail_invalid("ofem_benchmark_get_row: run the benchmark first");
  if (index >= bench->result.rows.size())
    return fail_invalid("ofem_benchmark_get_row: index out of range");
  const ofem::BenchRow& r = bench->result.rows[index];
  row->problem = r.problem.c_str();
  row->pair = r.pair.c_str();
  row->nu = r.nu;
  row->level = r.level;
  row->dofs = r.dofs;
  row->cells = r.cells;
  row->h_max = r.h_max;
  row->err_spg = r.err_spg;
  row->eta = r.eta;
  row->eta_res = r.eta_res;
  row->eta_div = r.eta_div;
  row->eta_facet = r.eta_F;
  row->eta_delta = r.eta_delta;
  row->eta_mu = r.eta_mu;
  row->effectivity = r.effectivity;
  row->order = r.has_order ? r.order : std::nan("");
  row->has_order = r.has_order ? 1 : 0;
  row->picard_iterations = r.picard_iterations;
  row->strip_fraction = r.strip_fraction;
  row->failed = r.failed ? 1 : 0;
  row->error = r.error.c_str();
  return OFEM_OK;
}

ofem_status ofem_benchmark_csv(const ofem_benchmark* bench, const char** csv) {
  if (!bench || !csv) return fail_invalid("ofem_benchmark_csv: NULL argument");
  if (!bench->has_result) return fail_invalid("ofem_benchmark_csv: run the benchmark first");
  *csv = bench->csv.c_str();
  return OFEM_OK;
}

ofem_status ofem_benchmark_json(const ofem_benchmark* bench, const char** json) {
  if (!bench || !json) return fail_invalid("ofem_benchmark_json: NULL argument");
  if (!bench->has_result) return fail_invalid("ofem_benchmark_json: run the benchmark first");
  *json = bench->json.c_str();
  return OFEM_OK;
}

void ofem_benchmark_destroy(ofem_benchmark* bench) { delete bench; }

}  // extern "C"
