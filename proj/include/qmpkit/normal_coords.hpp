#pragma once

#include <vector>

#include "qmpkit/chart.hpp"
#include "qmpkit/constants.hpp"

namespace qmpkit {

struct GeodesicSample {
  double s = 0.0;
  Vector q;
  Vector v;
};

struct Geodesic {
  Vector start;
  Vector velocity;
  std::vector<GeodesicSample> samples;

  const GeodesicSample& end() const { return samples.back(); }
};

// Integrates q'' + Gamma(q)(q', q') = 0 with classic RK4 at fixed step.
// The velocity norm omega_ab v^a v^b is conserved along the way; drift beyond
// `drift_tol` reports StepTooLarge, leaving the chart domain reports LeftDomain.
Geodesic integrate_geodesic(const MetricChart& chart, const Vector& start, const Vector& velocity,
                            double length, int steps, double drift_tol = 1e-8,
                            bool keep_samples = false);

struct ShootingResult {
  Vector y;          // frame coordinates of the target
  double distance;   // geodesic distance
  int iterations;
};

// Geodesic shooting: solve exp_from(y) = to by damped Newton on y, with the
// exact Jacobian of the discrete exp map from the tangent flow.
ShootingResult shoot(const MetricChart& chart, const Vector& from, const Vector& to,
                     double tol = 1e-10, int max_iterations = 50, int steps = 256);

double geodesic_distance(const MetricChart& chart, const Vector& a, const Vector& b);

// Riemann normal coordinates around q0. The orthonormal frame comes from the
// lower-triangular Cholesky factor of omega(q0), so it is deterministic.
class NormalChart {
public:
  NormalChart(const MetricChart& base, Vector q0, double radius, int steps);

  const Vector& origin() const { return q0_; }
  double radius() const { return radius_; }
  // frame column a = chart-coordinate components of the a-th frame vector.
  const Matrix& frame() const { return frame_; }

  // exp map: normal coordinates y -> chart point.
  Vector forward(const Vector& y) const;
  // Inverse by shooting; tolerance is an omega-distance.
  Vector inverse(const Vector& q, double tol = 1e-10) const;

  // Pullback metric components in normal coordinates (finite differences of
  // the exp map). At y = 0 this is the identity by construction.
  Matrix pullback_metric(const Vector& y) const;

  // The pullback as a numeric chart on the box |y_i| < radius.
  MetricChart pullback_chart() const;

  const MetricChart& base() const { return base_; }

private:
  MetricChart base_;
  Vector q0_;
  double radius_;
  int steps_;
  Matrix frame_;       // columns: frame vectors
  Matrix frame_inv_;
};

NormalChart build_normal_chart(const MetricChart& chart, const Vector& q0, double radius,
                               int steps = 1000);

// Least-squares fit of the quadratic metric expansion in normal coordinates,
//   omega_ij(y) = delta_ij + C_ikjl y^k y^l + O(|y|^3),
// against the curvature prediction C_ikjl = -(1/3) R_ikjl(q0) (frame
// components, symmetrized over the contracted pair k,l).
struct ExpansionFit {
  int dim = 0;
  std::vector<Matrix> coefficients;  // [i*dim + j](k,l), fitted
  std::vector<Matrix> prediction;    // [i*dim + j](k,l), -(1/3) sym R
  double max_abs_error = 0.0;

  const Matrix& coeff(int i, int j) const { return coefficients[i * dim + j]; }
  const Matrix& predicted(int i, int j) const { return prediction[i * dim + j]; }
};

ExpansionFit metric_expansion_fit(const NormalChart& chart, double fit_radius, int directions = 16,
                                  int radii = 4);

// DeWitt potential evaluated in the normal chart at radii r0 / 2^k, k = 0..count-1,
// along the first frame direction, extrapolated to y = 0 by a linear fit a + b r.
// The sign of `extrapolated` settles which sign the curvature limit takes; the
// magnitude prediction is (hbar^2/2m) |R|/6.
struct AsymptoteResult {
  std::vector<double> radii;
  std::vector<double> values;
  double extrapolated = 0.0;
  double slope = 0.0;
  double prediction_magnitude = 0.0;
  double scalar_curvature = 0.0;
  int sign = 0;
};

AsymptoteResult qmp_normal_asymptote(const MetricChart& chart, const Constants& c, const Vector& q0,
                                     double r0 = 0.1, int count = 6);

}  // namespace qmpkit
