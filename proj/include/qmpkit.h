/* C interface to the quantization toolkit: opaque chart handles, status
 * codes, flat double buffers. All functions returning qk_status leave a
 * human-readable message in qk_last_error() on failure (thread-local). */
#ifndef QMPKIT_H
#define QMPKIT_H

#include <stdint.h>

#if defined(_WIN32)
#define QK_API __declspec(dllexport)
#else
#define QK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qk_status {
  QK_OK = 0,
  QK_INVALID_ARGUMENT = 1,
  QK_PARSE_ERROR = 2,
  QK_POINT_OUTSIDE_DOMAIN = 3,
  QK_STENCIL_CLIPS_BOUNDARY = 4,
  QK_NON_POSITIVE_DEFINITE = 5,
  QK_LEFT_DOMAIN = 6,
  QK_STEP_TOO_LARGE = 7,
  QK_SHOOTING_DIVERGED = 8,
  QK_CONJUGATE_POINT_SUSPECTED = 9,
  QK_FIT_ILL_CONDITIONED = 10,
  QK_NOT_INVERTIBLE = 11,
  QK_NEGATIVE_DETERMINANT = 12,
  QK_NOT_NORMALIZED = 13,
  QK_GUARD_VIOLATION = 14,
  QK_ASYMMETRY_EXCEEDED = 15,
  QK_SOLVER_FAILURE = 16,
  QK_IO_ERROR = 17,
  QK_INTERNAL = 100
} qk_status;

/* Hamiltonian variants for the spectral entry points. */
typedef enum qk_variant {
  QK_VARIANT_SCHROEDINGER = 0,
  QK_VARIANT_DEWITT = 1,
  QK_VARIANT_NU_FAMILY = 2
} qk_variant;

typedef struct qk_chart qk_chart; /* opaque */

QK_API const char* qk_version(void);
QK_API const char* qk_status_name(qk_status status);
/* Message of the last failing call on this thread ("" if none). */
QK_API const char* qk_last_error(void);

/* Open a chart from a catalog id ("cartesian:2", "polar2", "sphere2:1.0",
 * "sphere3:1.0", "circle-deformed:0.2", "plane-deformed:0.1:sin-x") or from a
 * chart definition file path. */
QK_API qk_status qk_chart_open(const char* id_or_path, qk_chart** out);
QK_API void qk_chart_close(qk_chart* chart);
QK_API qk_status qk_chart_dim(const qk_chart* chart, int32_t* out);
QK_API const char* qk_chart_name(const qk_chart* chart);
/* omega: dim*dim row-major. */
QK_API qk_status qk_chart_metric(const qk_chart* chart, const double* q, double* omega);

/* Pointwise curvature data. Output buffers may be NULL when not wanted:
 * christoffel n*n*n (index [a][b][c] = Gamma^a_bc), ricci n*n, scalar 1. */
QK_API qk_status qk_geometry(const qk_chart* chart, const double* q, double* christoffel,
                             double* ricci, double* scalar);

QK_API qk_status qk_geodesic_distance(const qk_chart* chart, const double* a, const double* b,
                                      double* out);

/* Quantum-mechanical potential of the DeWitt ordering, plus the per-unit-
 * (nu-2) correction density of the wider ordering family. */
QK_API qk_status qk_qmp(const qk_chart* chart, double hbar, double mass, const double* q,
                        double* v_dw, double* nu_density);
QK_API qk_status qk_qmp_nu(const qk_chart* chart, double hbar, double mass, const double* q,
                           double nu, double* v_nu);

/* DeWitt potential in normal coordinates at radii r0/2^k along the first
 * frame direction, with the linear extrapolation to the origin and the
 * curvature prediction (hbar^2/2m)|R|/6. radii/values hold `count` entries. */
QK_API qk_status qk_normal_asymptote(const qk_chart* chart, double hbar, double mass,
                                     const double* q0, double r0, int32_t count, double* radii,
                                     double* values, double* extrapolated,
                                     double* prediction_magnitude, double* scalar_curvature,
                                     int32_t* sign);

/* Quadratic metric expansion in normal coordinates around q0 against the
 * curvature prediction. coeffs/prediction hold n^4 entries, index
 * [i][j][k][l] = coefficient of y^k y^l in omega_ij. */
QK_API qk_status qk_expansion_fit(const qk_chart* chart, const double* q0, double chart_radius,
                                  double fit_radius, double* coeffs, double* prediction,
                                  double* max_abs_error);

/* Exact DeWitt potential of the deformed flat chart q = x + eps f(x) at q,
 * and its first-order-in-eps prediction (eps hbar^2/4m) Lap(div f). */
QK_API qk_status qk_deformation_qmp(const char* field_id, int32_t dim, double eps, double hbar,
                                    double mass, const double* q, double* exact,
                                    double* first_order);

/* Lowest k levels of the discretized Hamiltonian variant. nodes holds one
 * entry per chart dimension. */
QK_API qk_status qk_spectrum(const qk_chart* chart, double hbar, double mass, int32_t variant,
                             double nu, const int32_t* nodes, int32_t guard_cells, int32_t k,
                             double* eigenvalues);

/* Spectra of one variant on two charts of the same manifold, the per-level
 * gap |a-b|, and the per-level discretization error estimate. All output
 * buffers hold k entries. */
QK_API qk_status qk_anomaly_gap(const qk_chart* chart_a, const qk_chart* chart_b, double hbar,
                                double mass, int32_t variant, double nu, const int32_t* nodes,
                                int32_t guard_cells, int32_t k, double* levels_a, double* levels_b,
                                double* gap, double* error_estimate);

/* Quasiclassical two-point data: classical action, van Vleck determinant,
 * two-point potential. */
QK_API qk_status qk_action(const qk_chart* chart, double hbar, double mass, const double* q,
                           const double* q_from, double dt, double* out);
QK_API qk_status qk_van_vleck(const qk_chart* chart, double hbar, double mass, const double* q,
                              const double* q_from, double dt, double* out);
QK_API qk_status qk_v_tilde(const qk_chart* chart, double hbar, double mass, const double* q,
                            const double* q_from, double dt, double* out);

/* Two-point potential along a geodesic ray at separations s0/2^k, linearly
 * extrapolated to coincidence, against the prediction (hbar^2/2m) R/6.
 * separations/values hold `count` entries. */
QK_API qk_status qk_coincidence_limit(const qk_chart* chart, double hbar, double mass,
                                      const double* q0, const double* direction, double s0,
                                      int32_t count, double dt, double* separations,
                                      double* values, double* extrapolated, double* prediction,
                                      double* scalar_curvature);

/* Action, van Vleck determinant, and two-point potential at `count` given
 * separations along a geodesic ray. Output buffers hold count entries each;
 * any may be NULL. */
QK_API qk_status qk_propagator_series(const qk_chart* chart, double hbar, double mass,
                                      const double* q0, const double* direction,
                                      const double* separations, int32_t count, double dt,
                                      double* actions, double* van_vlecks, double* v_tildes);

/* Curvature coupling (n-1)/(4n) of the quantized conformally flat metric
 * against the conformal coupling 1/6, in exact arithmetic. equal = 1 iff the
 * two rationals coincide (n = 3). */
QK_API qk_status qk_conformal_coefficient(int32_t n, int64_t* quantization_num,
                                          int64_t* quantization_den, int64_t* conformal_num,
                                          int64_t* conformal_den, int32_t* equal);

#ifdef __cplusplus
}
#endif

#endif /* QMPKIT_H */
