/* C interface of the oseenfem shared library.
 *
 * Every function that can fail returns an ofem_status; OFEM_OK is 0.  On
 * failure, ofem_last_error() returns a thread-local description of the most
 * recent error.  Objects are opaque handles owned by the caller and released
 * with the matching _destroy call.
 */
#ifndef OSEENFEM_H
#define OSEENFEM_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ofem_status {
  OFEM_OK = 0,
  OFEM_ERR_INVALID_ARGUMENT = 1,
  OFEM_ERR_SOLVER = 2,
  OFEM_ERR_IO = 3,
  OFEM_ERR_INTERNAL = 4
} ofem_status;

const char* ofem_version(void);
const char* ofem_last_error(void);

/* ---------------- meshes ---------------- */

typedef struct ofem_mesh ofem_mesh;

typedef struct ofem_mesh_info {
  long vertices;
  long cells;
  long facets;
  long boundary_facets;
  double max_diameter;
  double min_diameter;
  double total_area;
  double shape_regularity;
} ofem_mesh_info;

/* Structured unit-square mesh with the given number of uniform refinements. */
ofem_status ofem_mesh_create_unit_square(int levels, ofem_mesh** out);
/* Newest-vertex bisection of the marked cells plus conformity closure. */
ofem_status ofem_mesh_bisect(const ofem_mesh* mesh, const int* marked, size_t n_marked,
                             ofem_mesh** out);
ofem_status ofem_mesh_get_info(const ofem_mesh* mesh, ofem_mesh_info* info);
ofem_status ofem_mesh_write_vtk(const ofem_mesh* mesh, const char* path);
ofem_status ofem_mesh_write_dump(const ofem_mesh* mesh, const char* path);
void ofem_mesh_destroy(ofem_mesh* mesh);

/* ---------------- benchmark runs ---------------- */

typedef struct ofem_benchmark ofem_benchmark;

/* One result row; string fields stay valid until the next run or destroy. */
typedef struct ofem_bench_row {
  const char* problem;
  const char* pair;
  double nu;
  int level;
  long dofs;
  long cells;
  double h_max;
  double err_spg; /* spg norm of the error; spg,nse norm for nse-smooth */
  double eta;
  double eta_res;
  double eta_div;
  double eta_facet;
  double eta_delta;
  double eta_mu;
  double effectivity;
  double order;   /* NaN when has_order is 0 */
  int has_order;
  int picard_iterations; /* -1 for linear problems */
  double strip_fraction; /* -1 unless the layer problem */
  int failed;
  const char* error; /* empty unless failed */
} ofem_bench_row;

/* problem is one of "oseen-smooth", "oseen-layer", "nse-smooth". */
ofem_status ofem_benchmark_create(const char* problem, ofem_benchmark** bench);
/* pair is one of "P1/P1", "P2/P1", "P2/P2", "P3/P2", "P3/P3"; repeatable.
 * Without any call, all five pairs run. */
ofem_status ofem_benchmark_add_pair(ofem_benchmark* bench, const char* pair);
/* Repeatable; without any call a per-problem default grid runs. */
ofem_status ofem_benchmark_add_nu(ofem_benchmark* bench, double nu);
/* Uniform refinement levels, or adaptive rounds; 0 keeps per-pair defaults. */
ofem_status ofem_benchmark_set_levels(ofem_benchmark* bench, int levels);
/* marking is "maximum" or "fixed-fraction". */
ofem_status ofem_benchmark_set_adaptive(ofem_benchmark* bench, int adaptive, const char* marking,
                                        double theta, int initial_level);
/* out_dir may be NULL or empty for a dry run without report files. */
ofem_status ofem_benchmark_set_output(ofem_benchmark* bench, const char* out_dir, int write_vtk,
                                      int dump_system);
/* quad_degree 0 keeps the default assembly rule. */
ofem_status ofem_benchmark_set_numerics(ofem_benchmark* bench, int quad_degree, double c_inv,
                                        double solver_tol);
ofem_status ofem_benchmark_set_dof_budget(ofem_benchmark* bench, long budget);
ofem_status ofem_benchmark_set_picard(ofem_benchmark* bench, double tolerance,
                                      int max_iterations);
ofem_status ofem_benchmark_run(ofem_benchmark* bench);
ofem_status ofem_benchmark_row_count(const ofem_benchmark* bench, size_t* count);
ofem_status ofem_benchmark_get_row(const ofem_benchmark* bench, size_t index,
                                   ofem_bench_row* row);
/* Rendered report; the pointer stays valid until the next run or destroy. */
ofem_status ofem_benchmark_csv(const ofem_benchmark* bench, const char** csv);
ofem_status ofem_benchmark_json(const ofem_benchmark* bench, const char** json);
void ofem_benchmark_destroy(ofem_benchmark* bench);

#ifdef __cplusplus
}
#endif

#endif /* OSEENFEM_H */
