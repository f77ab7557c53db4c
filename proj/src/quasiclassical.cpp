#include "qmpkit/quasiclassical.hpp"

#include <cmath>

#include "qmpkit/fd.hpp"
#include "qmpkit/fields.hpp"
#include "qmpkit/geometry.hpp"
#include "qmpkit/normal_coords.hpp"
#include "qmpkit/quantization.hpp"

namespace qmpkit {

namespace {

double distance_tight(const MetricChart& chart, const Vector& from, const Vector& to) {
  return shoot(chart, from, to, 1e-13, 80, 64).distance;
}

// Mixed finite-difference step for the action Hessian. T = omega^(-1/4) D^(1/2)
// is smooth through coincidence, so the step has an absolute floor rather than
// shrinking with the separation (which would drown the quotient in noise).
double hessian_step(double s) { return std::max(s / 50.0, 0.02); }

}  // namespace

double classical_action(const MetricChart& chart, const Constants& c, const Vector& q,
                        const Vector& q_from, double dt) {
  c.validate();
  if (!(dt > 0.0)) fail(ErrorCode::InvalidArgument, "dt must be positive");
  const double s = distance_tight(chart, q_from, q);
  return c.mass * s * s / (2.0 * dt);
}

double van_vleck(const MetricChart& chart, const Constants& c, const Vector& q,
                 const Vector& q_from, double dt) {
  c.validate();
  if (!(dt > 0.0)) fail(ErrorCode::InvalidArgument, "dt must be positive");
  const int n = chart.dim();
  const double s = distance_tight(chart, q_from, q);
  const double h = hessian_step(s);

  auto action = [&](const Vector& a, const Vector& b) {
    const double d = distance_tight(chart, b, a);
    return c.mass * d * d / (2.0 * dt);
  };

  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto mixed = [&](double ha, double hb) {
        Vector qp = q, qm = q, fp = q_from, fm = q_from;
        qp(i) += ha;
        qm(i) -= ha;
        fp(j) += hb;
        fm(j) -= hb;
        return (action(qp, fp) - action(qp, fm) - action(qm, fp) + action(qm, fm)) /
               (4.0 * ha * hb);
      };
      const double coarse = mixed(h, h);
      const double fine = mixed(0.5 * h, 0.5 * h);
      m(i, j) = -(4.0 * fine - coarse) / 3.0;
    }

  const double det = m.determinant();
  if (!(det > 0.0))
    fail(ErrorCode::NegativeDeterminant,
         "van Vleck determinant " + std::to_string(det) + " (conjugate point crossed?)");
  return det;
}

double v_tilde(const MetricChart& chart, const Constants& c, const Vector& q, const Vector& q_from,
               double dt) {
  c.validate();
  const double s = distance_tight(chart, q_from, q);
  const double h_out = std::max(s / 50.0, fd::second_step(0.0));

  auto t_eval = [&](const Vector& p) {
    const double det = chart.metric(p).determinant();
    return std::pow(det, -0.25) * std::sqrt(van_vleck(chart, c, p, q_from, dt));
  };

  // Scalar field with fixed-step Richardson partials of T; the drift terms of
  // the Laplace-Beltrami operator come from the chart jet as usual.
  auto real_field = [t_eval](const Vector& p) { return Complex(t_eval(p), 0.0); };
  ScalarField t_field(
      real_field,
      [t_eval, h_out](const Vector& p, int b) {
        return Complex(fd::first_derivative_scalar(t_eval, p, b, h_out), 0.0);
      },
      [t_eval, h_out](const Vector& p, int b, int d) {
        if (b == d) return Complex(fd::second_derivative_scalar(t_eval, p, b, h_out), 0.0);
        return Complex(fd::mixed_derivative_scalar(t_eval, p, b, d, h_out, h_out), 0.0);
      });

  const double t0 = t_eval(q);
  if (!(std::abs(t0) > 0.0)) fail(ErrorCode::SolverFailure, "vanishing amplitude factor");
  return c.kinetic_scale() * apply_laplace_beltrami(chart, t_field, q).real() / t0;
}

namespace {

Vector point_at_separation(const MetricChart& chart, const Vector& q0, const Vector& direction,
                           double s) {
  if (direction.norm() == 0.0) fail(ErrorCode::InvalidArgument, "direction must be nonzero");
  const Matrix omega = chart.metric(q0);
  const Vector v = direction / std::sqrt(direction.dot(omega * direction));
  if (s == 0.0) return q0;
  return integrate_geodesic(chart, q0, v, s, 512).end().q;
}

}  // namespace

CoincidenceResult coincidence_limit(const MetricChart& chart, const Constants& c, const Vector& q0,
                                    const Vector& direction, double s0, int count, double dt) {
  c.validate();
  if (!(s0 > 0.0)) fail(ErrorCode::InvalidArgument, "s0 must be positive");
  if (count < 2) fail(ErrorCode::InvalidArgument, "need at least 2 separations");

  CoincidenceResult out;
  for (int k = 0; k < count; ++k) {
    const double s = s0 / std::pow(2.0, k);
    const Vector q = point_at_separation(chart, q0, direction, s);
    out.separations.push_back(s);
    out.values.push_back(v_tilde(chart, c, q, q0, dt));
  }

  const int m = count;
  double ss = 0.0, sv = 0.0, sss = 0.0, ssv = 0.0;
  for (int k = 0; k < m; ++k) {
    ss += out.separations[k];
    sv += out.values[k];
    sss += out.separations[k] * out.separations[k];
    ssv += out.separations[k] * out.values[k];
  }
  const double denom = m * sss - ss * ss;
  if (std::abs(denom) < 1e-300) fail(ErrorCode::FitIllConditioned, "degenerate separation sequence");
  const double slope = (m * ssv - ss * sv) / denom;
  out.extrapolated = (sv - slope * ss) / m;

  out.scalar_curvature = geometry_jet(chart, q0).scalar_curvature;
  out.prediction = c.kinetic_scale() * out.scalar_curvature / 6.0;
  return out;
}

std::vector<PropagatorSample> propagator_series(const MetricChart& chart, const Constants& c,
                                                const Vector& q0, const Vector& direction,
                                                const std::vector<double>& separations, double dt) {
  c.validate();
  if (!(dt > 0.0)) fail(ErrorCode::InvalidArgument, "dt must be positive");
  std::vector<PropagatorSample> out;
  out.reserve(separations.size());
  for (double s : separations) {
    if (!(s >= 0.0)) fail(ErrorCode::InvalidArgument, "separations must be >= 0");
    const Vector q = point_at_separation(chart, q0, direction, s);
    PropagatorSample sample;
    sample.s = s;
    sample.dt = dt;
    sample.action = classical_action(chart, c, q, q0, dt);
    sample.van_vleck = van_vleck(chart, c, q, q0, dt);
    sample.v_tilde = v_tilde(chart, c, q, q0, dt);
    out.push_back(sample);
  }
  return out;
}

}  // namespace qmpkit
