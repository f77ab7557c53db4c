#pragma once

#include <vector>

#include "qmpkit/chart.hpp"
#include "qmpkit/constants.hpp"

namespace qmpkit {

// Classical action of the free geodesic motion over a time slice dt:
//   S(q, q') = m s(q, q')^2 / (2 dt),  s = geodesic distance.
double classical_action(const MetricChart& chart, const Constants& c, const Vector& q,
                        const Vector& q_from, double dt);

// Van Vleck determinant D = det( -d^2 S / dq^i dq'^j ), mixed finite
// differences of the action. Throws NegativeDeterminant past a conjugate point.
double van_vleck(const MetricChart& chart, const Constants& c, const Vector& q,
                 const Vector& q_from, double dt);

// Two-point potential of the quasiclassical transition amplitude:
//   V~ = (hbar^2/2m) (Lap_q T) / T,   T(q) = g(q)^(-1/4) D(q, q')^(1/2),
// derivatives in q at fixed (q', dt). A bi-scalar: flat charts give 0 in any
// coordinates, and the coincidence limit is (hbar^2/2m) R/6.
double v_tilde(const MetricChart& chart, const Constants& c, const Vector& q,
               const Vector& q_from, double dt);

struct PropagatorSample {
  double s = 0.0;
  double dt = 0.0;
  double action = 0.0;
  double van_vleck = 0.0;
  double v_tilde = 0.0;
};

// V~ along a geodesic ray from q0, at separations s0/2^k, k = 0..count-1,
// extrapolated to coincidence with a linear fit a + b s and compared with
// (hbar^2/2m) R/6 at q0.
struct CoincidenceResult {
  std::vector<double> separations;
  std::vector<double> values;
  double extrapolated = 0.0;
  double prediction = 0.0;
  double scalar_curvature = 0.0;
};

CoincidenceResult coincidence_limit(const MetricChart& chart, const Constants& c, const Vector& q0,
                                    const Vector& direction, double s0 = 0.4, int count = 4,
                                    double dt = 1.0);

std::vector<PropagatorSample> propagator_series(const MetricChart& chart, const Constants& c,
                                                const Vector& q0, const Vector& direction,
                                                const std::vector<double>& separations, double dt);

}  // namespace qmpkit
