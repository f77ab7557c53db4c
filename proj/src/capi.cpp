#include "qmpkit.h"

#include <exception>
#include <string>

#include "qmpkit/catalog.hpp"
#include "qmpkit/flat_deformation.hpp"
#include "qmpkit/geometry.hpp"
#include "qmpkit/normal_coords.hpp"
#include "qmpkit/quantization.hpp"
#include "qmpkit/quasiclassical.hpp"
#include "qmpkit/spectral.hpp"

struct qk_chart {
  qmpkit::MetricChart chart;
};

namespace {

thread_local std::string g_last_error;

qk_status map_code(qmpkit::ErrorCode code) {
  using EC = qmpkit::ErrorCode;
  switch (code) {
    case EC::InvalidArgument: return QK_INVALID_ARGUMENT;
    case EC::ParseError: return QK_PARSE_ERROR;
    case EC::PointOutsideDomain: return QK_POINT_OUTSIDE_DOMAIN;
    case EC::StencilClipsBoundary: return QK_STENCIL_CLIPS_BOUNDARY;
    case EC::NonPositiveDefinite: return QK_NON_POSITIVE_DEFINITE;
    case EC::LeftDomain: return QK_LEFT_DOMAIN;
    case EC::StepTooLarge: return QK_STEP_TOO_LARGE;
    case EC::ShootingDiverged: return QK_SHOOTING_DIVERGED;
    case EC::ConjugatePointSuspected: return QK_CONJUGATE_POINT_SUSPECTED;
    case EC::FitIllConditioned: return QK_FIT_ILL_CONDITIONED;
    case EC::NotInvertible: return QK_NOT_INVERTIBLE;
    case EC::NegativeDeterminant: return QK_NEGATIVE_DETERMINANT;
    case EC::NotNormalized: return QK_NOT_NORMALIZED;
    case EC::GuardViolation: return QK_GUARD_VIOLATION;
    case EC::AsymmetryExceeded: return QK_ASYMMETRY_EXCEEDED;
    case EC::SolverFailure: return QK_SOLVER_FAILURE;
    case EC::IoError: return QK_IO_ERROR;
  }
  return QK_INTERNAL;
}

template <class Fn>
qk_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return QK_OK;
  } catch (const qmpkit::Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return QK_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return QK_INTERNAL;
  }
}

void require(bool cond, const char* what) {
  if (!cond) qmpkit::fail(qmpkit::ErrorCode::InvalidArgument, what);
}

Eigen::VectorXd to_vector(const double* p, int n) {
  require(p != nullptr, "null coordinate buffer");
  return Eigen::Map<const Eigen::VectorXd>(p, n);
}

qmpkit::Constants make_constants(double hbar, double mass) {
  qmpkit::Constants c{hbar, mass};
  c.validate();
  return c;
}

qmpkit::HamiltonianVariant map_variant(int32_t v) {
  require(v >= 0 && v <= 2, "variant must be 0 (Schroedinger), 1 (DeWitt), or 2 (nu family)");
  return static_cast<qmpkit::HamiltonianVariant>(v);
}

qmpkit::GridSpec make_grid_spec(const int32_t* nodes, int dim, int32_t guard_cells) {
  require(nodes != nullptr, "null node-count buffer");
  qmpkit::GridSpec spec;
  spec.nodes.assign(nodes, nodes + dim);
  spec.guard_cells = guard_cells;
  return spec;
}

}  // namespace

extern "C" {

const char* qk_version(void) { return "0.1.0"; }

const char* qk_last_error(void) { return g_last_error.c_str(); }

const char* qk_status_name(qk_status status) {
  switch (status) {
    case QK_OK: return "ok";
    case QK_INVALID_ARGUMENT: return "invalid argument";
    case QK_PARSE_ERROR: return "parse error";
    case QK_POINT_OUTSIDE_DOMAIN: return "point outside domain";
    case QK_STENCIL_CLIPS_BOUNDARY: return "stencil clips boundary";
    case QK_NON_POSITIVE_DEFINITE: return "metric not positive definite";
    case QK_LEFT_DOMAIN: return "left chart domain";
    case QK_STEP_TOO_LARGE: return "integration step too large";
    case QK_SHOOTING_DIVERGED: return "geodesic shooting diverged";
    case QK_CONJUGATE_POINT_SUSPECTED: return "conjugate point suspected";
    case QK_FIT_ILL_CONDITIONED: return "fit ill-conditioned";
    case QK_NOT_INVERTIBLE: return "deformation not invertible";
    case QK_NEGATIVE_DETERMINANT: return "non-positive determinant";
    case QK_NOT_NORMALIZED: return "state not normalized";
    case QK_GUARD_VIOLATION: return "grid guard violation";
    case QK_ASYMMETRY_EXCEEDED: return "matrix asymmetry exceeded";
    case QK_SOLVER_FAILURE: return "solver failure";
    case QK_IO_ERROR: return "io error";
    case QK_INTERNAL: return "internal error";
  }
  return "unknown status";
}

qk_status qk_chart_open(const char* id_or_path, qk_chart** out) {
  return guarded([&] {
    require(id_or_path != nullptr && out != nullptr, "null argument");
    auto handle = new qk_chart{qmpkit::open_chart(id_or_path)};
    *out = handle;
  });
}

void qk_chart_close(qk_chart* chart) { delete chart; }

qk_status qk_chart_dim(const qk_chart* chart, int32_t* out) {
  return guarded([&] {
    require(chart != nullptr && out != nullptr, "null argument");
    *out = chart->chart.dim();
  });
}

const char* qk_chart_name(const qk_chart* chart) {
  return chart ? chart->chart.name().c_str() : "";
}

qk_status qk_chart_metric(const qk_chart* chart, const double* q, double* omega) {
  return guarded([&] {
    require(chart != nullptr && omega != nullptr, "null argument");
    const int n = chart->chart.dim();
    const Eigen::MatrixXd m = chart->chart.metric(to_vector(q, n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) omega[i * n + j] = m(i, j);
  });
}

qk_status qk_geometry(const qk_chart* chart, const double* q, double* christoffel, double* ricci,
                      double* scalar) {
  return guarded([&] {
    require(chart != nullptr, "null chart");
    const int n = chart->chart.dim();
    const qmpkit::GeometryJet jet = qmpkit::geometry_jet(chart->chart, to_vector(q, n));
    if (christoffel)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c) christoffel[(a * n + b) * n + c] = jet.christoffel[a](b, c);
    if (ricci)
      for (int b = 0; b < n; ++b)
        for (int d = 0; d < n; ++d) ricci[b * n + d] = jet.ricci(b, d);
    if (scalar) *scalar = jet.scalar_curvature;
  });
}

qk_status qk_geodesic_distance(const qk_chart* chart, const double* a, const double* b,
                               double* out) {
  return guarded([&] {
    require(chart != nullptr && out != nullptr, "null argument");
    const int n = chart->chart.dim();
    *out = qmpkit::geodesic_distance(chart->chart, to_vector(a, n), to_vector(b, n));
  });
}

qk_status qk_qmp(const qk_chart* chart, double hbar, double mass, const double* q, double* v_dw,
                 double* nu_density) {
  return guarded([&] {
    require(chart != nullptr, "null chart");
    const int n = chart->chart.dim();
    const qmpkit::QmpValue v =
        qmpkit::qmp_dewitt(chart->chart, make_constants(hbar, mass), to_vector(q, n));
    if (v_dw) *v_dw = v.v_dw;
    if (nu_density) *nu_density = v.nu_correction_density;
  });
}

qk_status qk_qmp_nu(const qk_chart* chart, double hbar, double mass, const double* q, double nu,
                    double* v_nu) {
  return guarded([&] {
    require(chart != nullptr && v_nu != nullptr, "null argument");
    const int n = chart->chart.dim();
    *v_nu = qmpkit::qmp_nu(chart->chart, make_constants(hbar, mass), to_vector(q, n), nu);
  });
}

qk_status qk_normal_asymptote(const qk_chart* chart, double hbar, double mass, const double* q0,
                              double r0, int32_t count, double* radii, double* values,
                              double* extrapolated, double* prediction_magnitude,
                              double* scalar_curvature, int32_t* sign) {
  return guarded([&] {
    require(chart != nullptr, "null chart");
    const int n = chart->chart.dim();
    const qmpkit::AsymptoteResult r = qmpkit::qmp_normal_asymptote(
        chart->chart, make_constants(hbar, mass), to_vector(q0, n), r0, count);
    for (int k = 0; k < count; ++k) {
      if (radii) radii[k] = r.radii[k];
      if (values) values[k] = r.values[k];
    }
    if (extrapolated) *extrapolated = r.extrapolated;
    if (prediction_magnitude) *prediction_magnitude = r.prediction_magnitude;
    if (scalar_curvature) *scalar_curvature = r.scalar_curvature;
    if (sign) *sign = r.sign;
  });
}

qk_status qk_expansion_fit(const qk_chart* chart, const double* q0, double chart_radius,
                           double fit_radius, double* coeffs, double* prediction,
                           double* max_abs_error) {
  return guarded([&] {
    require(chart != nullptr, "null chart");
    const int n = chart->chart.dim();
    const qmpkit::NormalChart nchart =
        qmpkit::build_normal_chart(chart->chart, to_vector(q0, n), chart_radius);
    const qmpkit::ExpansionFit fit = qmpkit::metric_expansion_fit(nchart, fit_radius);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            const long idx = ((static_cast<long>(i) * n + j) * n + k) * n + l;
            if (coeffs) coeffs[idx] = fit.coeff(i, j)(k, l);
            if (prediction) prediction[idx] = fit.predicted(i, j)(k, l);
          }
    if (max_abs_error) *max_abs_error = fit.max_abs_error;
  });
}

qk_status qk_deformation_qmp(const char* field_id, int32_t dim, double eps, double hbar,
                             double mass, const double* q, double* exact, double* first_order) {
  return guarded([&] {
    require(field_id != nullptr, "null field id");
    const qmpkit::DeformationField field = qmpkit::DeformationField::from_id(field_id, dim, eps);
    const qmpkit::Constants c = make_constants(hbar, mass);
    const Eigen::VectorXd point = to_vector(q, dim);
    if (exact) *exact = qmpkit::qmp_dewitt(qmpkit::deformed_chart(field), c, point).v_dw;
    if (first_order) *first_order = qmpkit::qmp_deformation_first_order(field, c, point);
  });
}

qk_status qk_spectrum(const qk_chart* chart, double hbar, double mass, int32_t variant, double nu,
                      const int32_t* nodes, int32_t guard_cells, int32_t k, double* eigenvalues) {
  return guarded([&] {
    require(chart != nullptr && eigenvalues != nullptr, "null argument");
    const qmpkit::DiscretizedHamiltonian h =
        qmpkit::discretize(chart->chart, make_constants(hbar, mass), map_variant(variant),
                           make_grid_spec(nodes, chart->chart.dim(), guard_cells), nu);
    const qmpkit::Spectrum s = qmpkit::eigenvalues(h, k);
    for (int i = 0; i < s.eigenvalues.size(); ++i) eigenvalues[i] = s.eigenvalues(i);
  });
}

qk_status qk_anomaly_gap(const qk_chart* chart_a, const qk_chart* chart_b, double hbar, double mass,
                         int32_t variant, double nu, const int32_t* nodes, int32_t guard_cells,
                         int32_t k, double* levels_a, double* levels_b, double* gap,
                         double* error_estimate) {
  return guarded([&] {
    require(chart_a != nullptr && chart_b != nullptr, "null chart");
    require(chart_a->chart.dim() == chart_b->chart.dim(), "chart dimensions differ");
    const qmpkit::AnomalyReport r = qmpkit::anomaly_gap(
        chart_a->chart, chart_b->chart, make_constants(hbar, mass), map_variant(variant),
        make_grid_spec(nodes, chart_a->chart.dim(), guard_cells), k, nu);
    for (int i = 0; i < r.levels_a.size(); ++i) {
      if (levels_a) levels_a[i] = r.levels_a(i);
      if (levels_b) levels_b[i] = r.levels_b(i);
      if (gap) gap[i] = r.gap(i);
      if (error_estimate) error_estimate[i] = r.error_estimate(i);
    }
  });
}

qk_status qk_action(const qk_chart* chart, double hbar, double mass, const double* q,
                    const double* q_from, double dt, double* out) {
  return guarded([&] {
    require(chart != nullptr && out != nullptr, "null argument");
    const int n = chart->chart.dim();
    *out = qmpkit::classical_action(chart->chart, make_constants(hbar, mass), to_vector(q, n),
                                    to_vector(q_from, n), dt);
  });
}

qk_status qk_van_vleck(const qk_chart* chart, double hbar, double mass, const double* q,
                       const double* q_from, double dt, double* out) {
  return guarded([&] {
    require(chart != nullptr && out != nullptr, "null argument");
    const int n = chart->chart.dim();
    *out = qmpkit::van_vleck(chart->chart, make_constants(hbar, mass), to_vector(q, n),
                             to_vector(q_from, n), dt);
  });
}

qk_status qk_v_tilde(const qk_chart* chart, double hbar, double mass, const double* q,
                     const double* q_from, double dt, double* out) {
  return guarded([&] {
    require(chart != nullptr && out != nullptr, "null argument");
    const int n = chart->chart.dim();
    *out = qmpkit::v_tilde(chart->chart, make_constants(hbar, mass), to_vector(q, n),
                           to_vector(q_from, n), dt);
  });
}

qk_status qk_coincidence_limit(const qk_chart* chart, double hbar, double mass, const double* q0,
                               const double* direction, double s0, int32_t count, double dt,
                               double* separations, double* values, double* extrapolated,
                               double* prediction, double* scalar_curvature) {
  return guarded([&] {
    require(chart != nullptr, "null chart");
    const int n = chart->chart.dim();
    const qmpkit::CoincidenceResult r =
        qmpkit::coincidence_limit(chart->chart, make_constants(hbar, mass), to_vector(q0, n),
                                  to_vector(direction, n), s0, count, dt);
    for (int i = 0; i < count; ++i) {
      if (separations) separations[i] = r.separations[i];
      if (values) values[i] = r.values[i];
    }
    if (extrapolated) *extrapolated = r.extrapolated;
    if (prediction) *prediction = r.prediction;
    if (scalar_curvature) *scalar_curvature = r.scalar_curvature;
  });
}

qk_status qk_propagator_series(const qk_chart* chart, double hbar, double mass, const double* q0,
                               const double* direction, const double* separations, int32_t count,
                               double dt, double* actions, double* van_vlecks, double* v_tildes) {
  return guarded([&] {
    require(chart != nullptr && separations != nullptr, "null argument");
    require(count >= 1, "need at least one separation");
    const int n = chart->chart.dim();
    const std::vector<double> seps(separations, separations + count);
    const std::vector<qmpkit::PropagatorSample> samples = qmpkit::propagator_series(
        chart->chart, make_constants(hbar, mass), to_vector(q0, n), to_vector(direction, n), seps,
        dt);
    for (int i = 0; i < count; ++i) {
      if (actions) actions[i] = samples[i].action;
      if (van_vlecks) van_vlecks[i] = samples[i].van_vleck;
      if (v_tildes) v_tildes[i] = samples[i].v_tilde;
    }
  });
}

qk_status qk_conformal_coefficient(int32_t n, int64_t* quantization_num, int64_t* quantization_den,
                                   int64_t* conformal_num, int64_t* conformal_den, int32_t* equal) {
  return guarded([&] {
    const qmpkit::ConformalComparison r = qmpkit::conformal_coefficient(n);
    if (quantization_num) *quantization_num = r.quantization_coefficient.num;
    if (quantization_den) *quantization_den = r.quantization_coefficient.den;
    if (conformal_num) *conformal_num = r.conformal_coefficient.num;
    if (conformal_den) *conformal_den = r.conformal_coefficient.den;
    if (equal) *equal = r.equal ? 1 : 0;
  });
}

}  // extern "C"
