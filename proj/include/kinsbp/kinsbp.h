/* C interface of the kinsbp space-time transport solver.
 *
 * All entry points return kinsbp_status; on failure a human-readable message
 * is available from kinsbp_last_error() (thread-local). Objects returned
 * through out-parameters are owned by the caller and released with the
 * matching *_destroy function.
 */
#ifndef KINSBP_H
#define KINSBP_H

#include <stddef.h>

#if defined(_WIN32)
#define KINSBP_API __declspec(dllexport)
#else
#define KINSBP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kinsbp_status {
  KINSBP_OK = 0,
  KINSBP_ERROR_INVALID_ARGUMENT = 1,
  KINSBP_ERROR_INVALID_STATE = 2,
  KINSBP_ERROR_CONFIGURATION = 3,
  KINSBP_ERROR_SOLVER = 4,
  KINSBP_ERROR_UNSUPPORTED = 5,
  KINSBP_ERROR_INTERNAL = 6
} kinsbp_status;

typedef enum kinsbp_problem_kind {
  KINSBP_PROBLEM_MANUFACTURED = 0,        /* smooth periodic, exact solution */
  KINSBP_PROBLEM_VARIABLE_SCATTERING = 1, /* sigma_s = 1 + 100 x^2, unit source */
  KINSBP_PROBLEM_DIRICHLET_DECAY = 2,     /* source-free stability variant */
  KINSBP_PROBLEM_INFLOW = 3               /* inhomogeneous inflow data */
} kinsbp_problem_kind;

typedef enum kinsbp_velocity_kind {
  KINSBP_VELOCITY_TWO = 0,
  KINSBP_VELOCITY_GAUSS_LOBATTO = 1
} kinsbp_velocity_kind;

typedef enum kinsbp_dt_rule {
  KINSBP_DT_MATCH_ELEMENTS = 0, /* one time slab per spatial element */
  KINSBP_DT_TEN_DX = 1,         /* slab width = 10 * element width */
  KINSBP_DT_EXPLICIT = 2        /* `slabs` uniform slabs */
} kinsbp_dt_rule;

typedef struct kinsbp_run_config {
  int elements;                       /* K >= 1 */
  int nodes;                          /* N >= 2, per element and per slab */
  int time_nodes;                     /* temporal override; 0 follows nodes */
  kinsbp_velocity_kind velocity_kind;
  int velocity_nodes;                 /* n_v for Gauss-Lobatto */
  kinsbp_dt_rule dt_rule;
  int slabs;                          /* used by KINSBP_DT_EXPLICIT */
  double final_time;                  /* <= 0: problem default */
} kinsbp_run_config;

typedef struct kinsbp_energy_ledger {
  double t_start;
  double t_end;
  double top_energy;
  double bottom_energy;
  double damping_rho;
  double damping_g;
  double init_mismatch_rho;
  double init_mismatch_g;
  double sat_work_time;
  double forcing_work;
  double mean_coupling_work;
  double b_lr;
  double residual;
  double residual_scale;
} kinsbp_energy_ledger;

typedef struct kinsbp_problem kinsbp_problem;
typedef struct kinsbp_solution kinsbp_solution;

KINSBP_API const char* kinsbp_version(void);
KINSBP_API const char* kinsbp_last_error(void);
KINSBP_API void kinsbp_run_config_default(kinsbp_run_config* config);

/* ---- problems ---------------------------------------------------------- */

/* epsilon is ignored by the variable-scattering and decay problems. */
KINSBP_API kinsbp_status kinsbp_problem_create(kinsbp_problem_kind kind,
                                               double epsilon,
                                               kinsbp_problem** out);
KINSBP_API void kinsbp_problem_destroy(kinsbp_problem* problem);
KINSBP_API kinsbp_status kinsbp_problem_epsilon(const kinsbp_problem* problem,
                                                double* epsilon);
KINSBP_API kinsbp_status kinsbp_problem_final_time(const kinsbp_problem* problem,
                                                   double* final_time);
/* Call with times == NULL to query the count. */
KINSBP_API kinsbp_status kinsbp_problem_report_times(
    const kinsbp_problem* problem, double* times, int* count);

/* ---- solving ----------------------------------------------------------- */

KINSBP_API kinsbp_status kinsbp_solve(const kinsbp_problem* problem,
                                      const kinsbp_run_config* config,
                                      kinsbp_solution** out);
/* rho-only discrete diffusion-limit solve; periodic problems only. */
KINSBP_API kinsbp_status kinsbp_solve_diffusion_limit(
    const kinsbp_problem* problem, const kinsbp_run_config* config,
    kinsbp_solution** out);
KINSBP_API void kinsbp_solution_destroy(kinsbp_solution* solution);

/* ---- solution queries -------------------------------------------------- */

KINSBP_API kinsbp_status kinsbp_solution_slab_count(const kinsbp_solution* s,
                                                    int* count);
KINSBP_API kinsbp_status kinsbp_solution_space_size(const kinsbp_solution* s,
                                                    int* size);
KINSBP_API kinsbp_status kinsbp_solution_velocity_count(const kinsbp_solution* s,
                                                        int* count);
KINSBP_API kinsbp_status kinsbp_solution_space_nodes(const kinsbp_solution* s,
                                                     double* x);
KINSBP_API kinsbp_status kinsbp_solution_velocity_nodes(const kinsbp_solution* s,
                                                        double* v);
KINSBP_API kinsbp_status kinsbp_solution_final_time(const kinsbp_solution* s,
                                                    double* t);
/* Distinct temporal nodes in ascending order; times == NULL queries count. */
KINSBP_API kinsbp_status kinsbp_solution_time_nodes(const kinsbp_solution* s,
                                                    double* times, int* count);

/* Nodal values at a grid time (later slab wins at junctions). rho has
 * space_size entries; g, when non-NULL, holds velocity_count blocks of
 * space_size values. */
KINSBP_API kinsbp_status kinsbp_solution_slice(const kinsbp_solution* s,
                                               double t, double* rho,
                                               double* g);
/* Values at an arbitrary time via the slab-local polynomial in time. */
KINSBP_API kinsbp_status kinsbp_solution_slice_interpolated(
    const kinsbp_solution* s, double t, double* rho, double* g);
KINSBP_API kinsbp_status kinsbp_solution_dump_csv(const kinsbp_solution* s,
                                                  const char* path);

/* ---- diagnostics ------------------------------------------------------- */

KINSBP_API kinsbp_status kinsbp_solution_errors(const kinsbp_solution* s,
                                                double t, double* err_rho,
                                                double* err_g);
KINSBP_API kinsbp_status kinsbp_solution_energy_ledger(
    const kinsbp_solution* s, int slab_index, kinsbp_energy_ledger* ledger);
KINSBP_API kinsbp_status kinsbp_solution_mean_g_defect(const kinsbp_solution* s,
                                                       double* defect,
                                                       double* g_max);
KINSBP_API kinsbp_status kinsbp_ap_gap(const kinsbp_solution* kinetic,
                                       const kinsbp_solution* limit,
                                       double* gap);
/* Order between two refinement rows; fails when a zero error leaves the
 * order undefined. */
KINSBP_API kinsbp_status kinsbp_convergence_order(double err_coarse,
                                                  double err_fine,
                                                  int elements_coarse,
                                                  int elements_fine,
                                                  double* order);

/* ---- operator verification -------------------------------------------- */

KINSBP_API kinsbp_status kinsbp_verify_sbp(int nodes, double* max_exactness_err,
                                           double* symmetry_defect, int* pass);
KINSBP_API kinsbp_status kinsbp_sbp_report(int nodes, char* buffer,
                                           size_t size);
KINSBP_API kinsbp_status kinsbp_verify_skew(int nodes, int elements,
                                            double* max_defect, int* pass);
KINSBP_API kinsbp_status kinsbp_verify_temporal(int nodes,
                                                double* min_real_eigenvalue,
                                                int* pass);
KINSBP_API kinsbp_status kinsbp_verify_diagonalization(
    int velocity_nodes, double epsilon, double* similarity_residual,
    double* inverse_residual, int* pass);
KINSBP_API kinsbp_status kinsbp_boundary_condition_count(
    kinsbp_velocity_kind kind, int velocity_nodes, int* n_left, int* n_right,
    int* n_none);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* KINSBP_H */
