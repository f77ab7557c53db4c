#include "qmpkit/normal_coords.hpp"

#include <cmath>
#include <memory>

#include <Eigen/Cholesky>
#include <Eigen/SVD>

#include "qmpkit/fd.hpp"
#include "qmpkit/geometry.hpp"
#include "qmpkit/quantization.hpp"

namespace qmpkit {

namespace {

struct State {
  Vector q;
  Vector v;
};

State rhs(const MetricChart& chart, const State& s) {
  MetricJet jet;
  try {
    jet = chart.jet(s.q, 1);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::PointOutsideDomain || e.code() == ErrorCode::StencilClipsBoundary)
      fail(ErrorCode::LeftDomain, "geodesic left the chart domain");
    throw;
  }
  const std::vector<Matrix> gamma = christoffel_symbols(jet);
  const int n = static_cast<int>(s.q.size());
  State d;
  d.q = s.v;
  d.v = Vector::Zero(n);
  for (int a = 0; a < n; ++a) d.v(a) = -s.v.dot(gamma[a] * s.v);
  return d;
}

double omega_norm2(const MetricChart& chart, const Vector& q, const Vector& v) {
  return v.dot(chart.metric_unchecked(q) * v);
}

// Orthonormal frame from the lower-triangular Cholesky factor of omega(q0):
// columns F_a satisfy F^T omega F = I, and the construction is deterministic.
Matrix cholesky_frame(const Matrix& omega) {
  Eigen::LLT<Matrix> llt(omega);
  if (llt.info() != Eigen::Success)
    fail(ErrorCode::NonPositiveDefinite, "metric not positive definite at frame point");
  const Matrix l = llt.matrixL();
  return l.transpose().inverse();
}

// Geodesic flow over unit parameter time with initial velocity w, optionally
// carrying the tangent map J = dq(1)/dw through the variational equation
//   J_q' = J_v,   (J_v')^a_k = -(d_e Gamma^a_bc) v^b v^c (J_q)^e_k
//                              - 2 Gamma^a_bc v^b (J_v)^c_k.
// The tangent map makes pullback metrics and shooting Jacobians smooth to
// machine precision, where divided differences of the flow would leave
// roundoff that second derivatives amplify.
struct Flow {
  Vector q;
  Vector v;
  Matrix jq;
  Matrix jv;
};

Flow flow_rhs(const MetricChart& chart, const Flow& s, bool with_tangent) {
  MetricJet jet;
  try {
    jet = chart.jet(s.q, with_tangent ? 2 : 1);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::PointOutsideDomain || e.code() == ErrorCode::StencilClipsBoundary)
      fail(ErrorCode::LeftDomain, "geodesic left the chart domain");
    throw;
  }
  const int n = static_cast<int>(s.q.size());
  const std::vector<Matrix> gamma = christoffel_symbols(jet);

  Flow d;
  d.q = s.v;
  d.v = Vector::Zero(n);
  for (int a = 0; a < n; ++a) d.v(a) = -s.v.dot(gamma[a] * s.v);

  if (with_tangent) {
    const std::vector<std::vector<Matrix>> dgamma = christoffel_derivatives(jet);
    d.jq = s.jv;
    d.jv = Matrix::Zero(n, n);
    for (int a = 0; a < n; ++a) {
      Eigen::RowVectorXd gv = (gamma[a] * s.v).transpose();  // Gamma^a_bc v^c
      d.jv.row(a) -= 2.0 * gv * s.jv;
      for (int e = 0; e < n; ++e) {
        const double dg = s.v.dot(dgamma[e][a] * s.v);
        d.jv.row(a) -= dg * s.jq.row(e);
      }
    }
  }
  return d;
}

Flow integrate_flow(const MetricChart& chart, const Vector& q0, const Vector& w, int steps,
                    bool with_tangent) {
  const int n = static_cast<int>(q0.size());
  Flow s;
  s.q = q0;
  s.v = w;
  if (with_tangent) {
    s.jq = Matrix::Zero(n, n);
    s.jv = Matrix::Identity(n, n);
  }
  const double h = 1.0 / steps;
  auto advance = [&](const Flow& a, const Flow& b, double c) {
    Flow out;
    out.q = a.q + c * b.q;
    out.v = a.v + c * b.v;
    if (with_tangent) {
      out.jq = a.jq + c * b.jq;
      out.jv = a.jv + c * b.jv;
    }
    return out;
  };
  for (int i = 0; i < steps; ++i) {
    const Flow k1 = flow_rhs(chart, s, with_tangent);
    const Flow k2 = flow_rhs(chart, advance(s, k1, 0.5 * h), with_tangent);
    const Flow k3 = flow_rhs(chart, advance(s, k2, 0.5 * h), with_tangent);
    const Flow k4 = flow_rhs(chart, advance(s, k3, h), with_tangent);
    s.q += h / 6.0 * (k1.q + 2.0 * k2.q + 2.0 * k3.q + k4.q);
    s.v += h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
    if (with_tangent) {
      s.jq += h / 6.0 * (k1.jq + 2.0 * k2.jq + 2.0 * k3.jq + k4.jq);
      s.jv += h / 6.0 * (k1.jv + 2.0 * k2.jv + 2.0 * k3.jv + k4.jv);
    }
    if (!chart.domain().contains(s.q)) fail(ErrorCode::LeftDomain, "geodesic left the chart domain");
  }
  return s;
}

Vector exp_map(const MetricChart& chart, const Vector& q0, const Matrix& frame, const Vector& y,
               int steps) {
  if (y.norm() == 0.0) return q0;
  return integrate_flow(chart, q0, frame * y, steps, false).q;
}

}  // namespace

Geodesic integrate_geodesic(const MetricChart& chart, const Vector& start, const Vector& velocity,
                            double length, int steps, double drift_tol, bool keep_samples) {
  if (steps < 1) fail(ErrorCode::InvalidArgument, "steps must be >= 1");
  if (!(length >= 0.0)) fail(ErrorCode::InvalidArgument, "length must be >= 0");
  chart.domain().require_inside(start);

  Geodesic out;
  out.start = start;
  out.velocity = velocity;

  State s{start, velocity};
  const double h = length / steps;
  const double norm0 = omega_norm2(chart, start, velocity);
  if (keep_samples) out.samples.push_back({0.0, s.q, s.v});

  for (int i = 0; i < steps && length > 0.0; ++i) {
    const State k1 = rhs(chart, s);
    const State k2 = rhs(chart, {s.q + 0.5 * h * k1.q, s.v + 0.5 * h * k1.v});
    const State k3 = rhs(chart, {s.q + 0.5 * h * k2.q, s.v + 0.5 * h * k2.v});
    const State k4 = rhs(chart, {s.q + h * k3.q, s.v + h * k3.v});
    s.q += h / 6.0 * (k1.q + 2.0 * k2.q + 2.0 * k3.q + k4.q);
    s.v += h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);

    if (!chart.domain().contains(s.q)) fail(ErrorCode::LeftDomain, "geodesic left the chart domain");
    const double norm = omega_norm2(chart, s.q, s.v);
    if (std::abs(norm - norm0) > drift_tol * std::max(1.0, norm0))
      fail(ErrorCode::StepTooLarge, "velocity norm drifted by " + std::to_string(norm - norm0) +
                                        " after step " + std::to_string(i + 1));
    if (keep_samples) out.samples.push_back({(i + 1) * h, s.q, s.v});
  }
  if (!keep_samples || length == 0.0) out.samples.push_back({length, s.q, s.v});
  return out;
}

ShootingResult shoot(const MetricChart& chart, const Vector& from, const Vector& to, double tol,
                     int max_iterations, int steps) {
  chart.domain().require_inside(from);
  chart.domain().require_inside(to);
  const int n = chart.dim();

  const Matrix omega_from = chart.metric(from);
  const Matrix omega_to = chart.metric_unchecked(to);
  const Matrix frame = cholesky_frame(omega_from);
  const Matrix frame_inv = frame.inverse();

  auto residual = [&](const Vector& y) {
    return chart.domain().wrapped_difference(exp_map(chart, from, frame, y, steps), to).eval();
  };
  auto res_norm = [&](const Vector& r) { return std::sqrt(r.dot(omega_to * r)); };

  Vector y = frame_inv * chart.domain().wrapped_difference(to, from);
  Vector r = residual(y);
  double rn = res_norm(r);

  for (int iter = 0; iter < max_iterations; ++iter) {
    if (rn <= tol) return {y, y.norm(), iter};

    // Exact Jacobian of the discrete exp map from the tangent flow.
    Matrix jac;
    if (y.norm() == 0.0) {
      jac = frame;  // d exp / dy at y = 0
    } else {
      const Flow f = integrate_flow(chart, from, frame * y, steps, true);
      jac = f.jq * frame;
    }

    Eigen::JacobiSVD<Matrix> svd(jac, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    if (!(smax > 0.0) || smin < 1e-12 * smax)
      fail(ErrorCode::ConjugatePointSuspected, "shooting Jacobian is near-singular");
    const Vector dy = svd.solve(-r);

    // Damped step: halve on residual increase (or on leaving the domain).
    double lambda = 1.0;
    for (int halvings = 0;; ++halvings) {
      if (halvings >= 30)
        fail(ErrorCode::ShootingDiverged, "no descent direction at residual " + std::to_string(rn));
      const Vector y_try = y + lambda * dy;
      double rn_try = std::numeric_limits<double>::infinity();
      Vector r_try;
      try {
        r_try = residual(y_try);
        rn_try = res_norm(r_try);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::LeftDomain) throw;
      }
      if (rn_try < rn || rn_try <= tol) {
        y = y_try;
        r = r_try;
        rn = rn_try;
        break;
      }
      lambda *= 0.5;
    }
  }
  if (rn <= tol) return {y, y.norm(), max_iterations};
  fail(ErrorCode::ShootingDiverged,
       "residual " + std::to_string(rn) + " after " + std::to_string(max_iterations) + " iterations");
}

double geodesic_distance(const MetricChart& chart, const Vector& a, const Vector& b) {
  return shoot(chart, a, b).distance;
}

NormalChart::NormalChart(const MetricChart& base, Vector q0, double radius, int steps)
    : base_(base), q0_(std::move(q0)), radius_(radius), steps_(steps) {
  if (!(radius > 0.0)) fail(ErrorCode::InvalidArgument, "radius must be positive");
  if (steps < 16) fail(ErrorCode::InvalidArgument, "steps must be >= 16");
  frame_ = cholesky_frame(base.metric(q0_));
  frame_inv_ = frame_.inverse();
}

Vector NormalChart::forward(const Vector& y) const {
  if (y.size() != base_.dim()) fail(ErrorCode::InvalidArgument, "dimension mismatch");
  return exp_map(base_, q0_, frame_, y, steps_);
}

Vector NormalChart::inverse(const Vector& q, double tol) const {
  return shoot(base_, q0_, q, tol, 50, steps_).y;
}

Matrix NormalChart::pullback_metric(const Vector& y) const {
  if (y.size() != base_.dim()) fail(ErrorCode::InvalidArgument, "dimension mismatch");
  const int n = base_.dim();
  if (y.norm() == 0.0) return Matrix::Identity(n, n);
  const Flow f = integrate_flow(base_, q0_, frame_ * y, steps_, true);
  const Matrix jac = f.jq * frame_;
  const Matrix omega = base_.metric_unchecked(f.q);
  return jac.transpose() * omega * jac;
}

MetricChart NormalChart::pullback_chart() const {
  std::vector<Axis> axes(base_.dim(), Axis{-radius_, radius_, false});
  // Copy enough state to keep the chart self-contained.
  auto self = std::make_shared<NormalChart>(*this);
  return MetricChart::numeric("normal(" + base_.name() + ")", Domain(std::move(axes)),
                              [self](const Vector& y) { return self->pullback_metric(y); });
}

NormalChart build_normal_chart(const MetricChart& chart, const Vector& q0, double radius,
                               int steps) {
  return NormalChart(chart, q0, radius, steps);
}

namespace {

// Deterministic unit directions: uniform angles in 2D, golden-angle spiral in 3D.
std::vector<Vector> unit_directions(int n, int count) {
  std::vector<Vector> dirs;
  if (n == 1) {
    dirs.push_back(Vector::Constant(1, 1.0));
    dirs.push_back(Vector::Constant(1, -1.0));
    return dirs;
  }
  if (n == 2) {
    for (int m = 0; m < count; ++m) {
      const double a = 2.0 * M_PI * m / count;
      Vector d(2);
      d << std::cos(a), std::sin(a);
      dirs.push_back(d);
    }
    return dirs;
  }
  if (n == 3) {
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int m = 0; m < count; ++m) {
      const double z = 1.0 - 2.0 * (m + 0.5) / count;
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double a = golden * m;
      Vector d(3);
      d << rho * std::cos(a), rho * std::sin(a), z;
      dirs.push_back(d);
    }
    return dirs;
  }
  fail(ErrorCode::InvalidArgument, "expansion fit supports dimensions 1 to 3");
}

}  // namespace

ExpansionFit metric_expansion_fit(const NormalChart& chart, double fit_radius, int directions,
                                  int radii) {
  const int n = chart.base().dim();
  if (!(fit_radius > 0.0) || fit_radius > chart.radius())
    fail(ErrorCode::InvalidArgument, "fit_radius must lie in (0, radius]");
  if (radii < 2 || directions < 2) fail(ErrorCode::InvalidArgument, "need at least 2 radii and directions");

  const std::vector<Vector> dirs = unit_directions(n, directions);

  // Samples of omega_ij(y) - delta_ij against the monomials y^k y^l (k <= l).
  const int params = n * (n + 1) / 2;
  const int rows = static_cast<int>(dirs.size()) * radii;
  if (rows < params) fail(ErrorCode::FitIllConditioned, "not enough samples for the quadratic fit");

  Matrix design(rows, params);
  std::vector<Matrix> samples;
  samples.reserve(rows);
  int row = 0;
  for (const Vector& d : dirs)
    for (int j = 1; j <= radii; ++j) {
      const double r = fit_radius * j / radii;
      const Vector y = r * d;
      int col = 0;
      for (int k = 0; k < n; ++k)
        for (int l = k; l < n; ++l) {
          design(row, col) = (k == l) ? y(k) * y(k) : 2.0 * y(k) * y(l);
          ++col;
        }
      samples.push_back(chart.pullback_metric(y));
      ++row;
    }

  Eigen::ColPivHouseholderQR<Matrix> qr(design);
  if (qr.rank() < params)
    fail(ErrorCode::FitIllConditioned, "quadratic fit design matrix is rank-deficient");

  ExpansionFit fit;
  fit.dim = n;
  fit.coefficients.assign(n * n, Matrix::Zero(n, n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Vector rhs_col(rows);
      for (int s = 0; s < rows; ++s) rhs_col(s) = samples[s](i, j) - (i == j ? 1.0 : 0.0);
      const Vector sol = qr.solve(rhs_col);
      Matrix& cm = fit.coefficients[i * n + j];
      int col = 0;
      for (int k = 0; k < n; ++k)
        for (int l = k; l < n; ++l) {
          cm(k, l) = sol(col);
          cm(l, k) = sol(col);
          ++col;
        }
    }

  // Curvature prediction: C_ikjl = -(1/3) R_ikjl at the origin, in frame
  // components, symmetrized over the contracted pair (k,l).
  const GeometryJet geo = geometry_jet(chart.base(), chart.origin());
  const Matrix& frame = chart.frame();
  auto lower = [&](int a, int b, int c, int d) {
    double sum = 0.0;
    for (int e = 0; e < n; ++e) sum += geo.metric(a, e) * geo.riemann[e][b](c, d);
    return sum;
  };
  auto frame_lower = [&](int i, int k, int j, int l) {
    double sum = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d)
            sum += lower(a, b, c, d) * frame(a, i) * frame(b, k) * frame(c, j) * frame(d, l);
    return sum;
  };

  fit.prediction.assign(n * n, Matrix::Zero(n, n));
  double max_err = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Matrix& pm = fit.prediction[i * n + j];
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          pm(k, l) = -(frame_lower(i, k, j, l) + frame_lower(i, l, j, k)) / 6.0;
      max_err = std::max(max_err, (fit.coefficients[i * n + j] - pm).cwiseAbs().maxCoeff());
    }
  fit.max_abs_error = max_err;
  return fit;
}

AsymptoteResult qmp_normal_asymptote(const MetricChart& chart, const Constants& c, const Vector& q0,
                                     double r0, int count) {
  c.validate();
  if (!(r0 > 0.0)) fail(ErrorCode::InvalidArgument, "r0 must be positive");
  if (count < 2) fail(ErrorCode::InvalidArgument, "need at least 2 radii");

  const NormalChart nchart = build_normal_chart(chart, q0, 1.5 * r0);
  const MetricChart pullback = nchart.pullback_chart();
  const int n = chart.dim();

  AsymptoteResult out;
  for (int k = 0; k < count; ++k) {
    const double r = r0 / std::pow(2.0, k);
    Vector y = Vector::Zero(n);
    y(0) = r;
    out.radii.push_back(r);
    out.values.push_back(qmp_dewitt(pullback, c, y).v_dw);
  }

  // Linear fit value = a + b r; a is the coordinate-free limit.
  const int m = count;
  double sr = 0.0, sv = 0.0, srr = 0.0, srv = 0.0;
  for (int k = 0; k < m; ++k) {
    sr += out.radii[k];
    sv += out.values[k];
    srr += out.radii[k] * out.radii[k];
    srv += out.radii[k] * out.values[k];
  }
  const double denom = m * srr - sr * sr;
  if (std::abs(denom) < 1e-300) fail(ErrorCode::FitIllConditioned, "degenerate radii sequence");
  out.slope = (m * srv - sr * sv) / denom;
  out.extrapolated = (sv - out.slope * sr) / m;

  out.scalar_curvature = geometry_jet(chart, q0).scalar_curvature;
  out.prediction_magnitude = c.kinetic_scale() * std::abs(out.scalar_curvature) / 6.0;
  const double tol = std::max(1e-6 * c.kinetic_scale(), 1e-3 * out.prediction_magnitude);
  out.sign = out.extrapolated > tol ? 1 : (out.extrapolated < -tol ? -1 : 0);
  return out;
}

}  // namespace qmpkit
