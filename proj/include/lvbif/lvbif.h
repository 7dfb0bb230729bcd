#ifndef LVBIF_LVBIF_H
#define LVBIF_LVBIF_H

#include <stddef.h>

#if defined(LVBIF_BUILDING_LIBRARY)
#define LVB_API __attribute__((visibility("default")))
#else
#define LVB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lvb_status {
  LVB_OK = 0,
  LVB_ERR_VALIDATION = 1, /* bad parameters or options */
  LVB_ERR_DOMAIN = 2,     /* request outside the admissible parameter range */
  LVB_ERR_SOLVER = 3,     /* nonlinear or linear solve did not converge */
  LVB_ERR_IO = 4,
  LVB_ERR_INTERNAL = 5,
  LVB_ERR_NULL = 6, /* a required pointer argument was NULL */
  LVB_ERR_RANGE = 7 /* index or buffer size out of range */
} lvb_status;

/* Message for the last failing call on this thread; never NULL. */
LVB_API const char* lvb_last_error(void);
LVB_API const char* lvb_status_name(lvb_status s);

typedef struct lvb_params lvb_params;
typedef struct lvb_spectrum lvb_spectrum;
typedef struct lvb_points lvb_points;
typedef struct lvb_branch lvb_branch;
typedef struct lvb_limit lvb_limit;

/* ---- parameters and constant states ---- */

LVB_API lvb_status lvb_params_create(double mu, double sigma, double alpha, double gamma, int dim,
                                     lvb_params** out);
LVB_API void lvb_params_destroy(lvb_params* p);

typedef struct lvb_linearization {
  double beta, a, b;
  double delta1, delta2;
  double m;
  double Q[4]; /* row-major 2x2, eigenvectors of the interaction matrix as columns */
  double P[4]; /* same layout, eigenvectors of its transpose */
} lvb_linearization;

LVB_API lvb_status lvb_constant_state(const lvb_params* p, double beta, double* a, double* b);
LVB_API lvb_status lvb_linearize(const lvb_params* p, double beta, lvb_linearization* out);

/* ---- discrete radial Neumann spectrum ---- */

/* Eigenpairs j = 0..k on an n-node grid of the unit ball in dimension dim. */
LVB_API lvb_status lvb_spectrum_compute(int dim, int n, int k, lvb_spectrum** out);
LVB_API void lvb_spectrum_destroy(lvb_spectrum* s);
LVB_API int lvb_spectrum_mode_count(const lvb_spectrum* s); /* k + 1 */
LVB_API int lvb_spectrum_grid_size(const lvb_spectrum* s);
LVB_API lvb_status lvb_spectrum_eigenvalue(const lvb_spectrum* s, int j, double* lambda);
LVB_API lvb_status lvb_spectrum_eigenfunction(const lvb_spectrum* s, int j, double* buf, size_t len);
LVB_API lvb_status lvb_spectrum_nodes(const lvb_spectrum* s, double* r, size_t len);
LVB_API lvb_status lvb_bessel_oracle(int dim, int j, double* lambda);

/* ---- bifurcation points ---- */

typedef struct lvb_point_info {
  int j;
  double lambda_j, beta_j, m_j, a, b;
  double step2, pairing, nondeg;
  int index_left, index_right;
} lvb_point_info;

/* Spectrum must cover every eigenvalue below sqrt(mu*sigma) plus one. */
LVB_API lvb_status lvb_points_compute(const lvb_params* p, const lvb_spectrum* s, lvb_points** out);
LVB_API void lvb_points_destroy(lvb_points* pts);
LVB_API int lvb_points_count(const lvb_points* pts);
LVB_API lvb_status lvb_points_get(const lvb_points* pts, int index, lvb_point_info* out);

/* ---- branch continuation ---- */

typedef struct lvb_branch_options {
  double beta_max;  /* 0: 1000 * beta_j */
  int max_points;   /* 0: 500 */
  double amplitude; /* 0: 1e-2 */
} lvb_branch_options;

typedef struct lvb_branch_point {
  double s, beta;
  double residual;
  double sup_u1, sup_u2, min_u1, min_u2;
  double h1_u1, h1_u2, overlap;
  int nodal_count, nodal_simple;
} lvb_branch_point;

/* Continues the branch from point j (1-based) in direction +1 or -1; opts may be NULL. */
LVB_API lvb_status lvb_branch_continue(const lvb_params* p, const lvb_spectrum* s, const lvb_points* pts, int j,
                                       int direction, const lvb_branch_options* opts, lvb_branch** out);
LVB_API void lvb_branch_destroy(lvb_branch* b);
LVB_API int lvb_branch_size(const lvb_branch* b);
LVB_API const char* lvb_branch_termination(const lvb_branch* b);
LVB_API lvb_status lvb_branch_point_get(const lvb_branch* b, int index, lvb_branch_point* out);
LVB_API lvb_status lvb_branch_state(const lvb_branch* b, int index, double* u1, double* u2, size_t len);

/* ---- strong-competition limit ---- */

/* Requires sigma == mu and mu > lambda_j. orientation (+1 or -1) is the sign of w at the center;
   the branch leaving point j in direction d approaches the profile with orientation
   lvb_branch_orientation(pts, j, d). */
LVB_API lvb_status lvb_limit_solve(const lvb_params* p, const lvb_spectrum* s, int j, int orientation,
                                   lvb_limit** out);
LVB_API int lvb_branch_orientation(const lvb_points* pts, int j, int direction);
LVB_API void lvb_limit_destroy(lvb_limit* l);
LVB_API lvb_status lvb_limit_profile(const lvb_limit* l, double* w, size_t len);
LVB_API int lvb_limit_root_count(const lvb_limit* l);
LVB_API lvb_status lvb_limit_distance(const lvb_limit* l, const lvb_branch* b, int index, double* dist);

/* ---- commands ---- */

/* Runs eigen | points | branch | limit | verify | report with a JSON configuration (NULL for defaults).
   On success *summary receives a JSON document (free with lvb_string_free) and *exit_code the
   command's own status (4 when a theorem-grade check fails). */
LVB_API lvb_status lvb_run_command(const char* command, const char* config_json, char** summary, int* exit_code);
/* Merged configuration as JSON, for echoing effective settings. */
LVB_API lvb_status lvb_resolve_config(const char* config_json, char** resolved);
LVB_API void lvb_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
