#include "qmpkit/chart.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Cholesky>

#include "qmpkit/fd.hpp"

namespace qmpkit {

namespace {

std::string point_string(const Vector& q) {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < q.size(); ++i) os << (i ? ", " : "") << q(i);
  os << ")";
  return os.str();
}

void check_spd(const Matrix& m, const Vector& q) {
  if (m.rows() != m.cols()) fail(ErrorCode::InvalidArgument, "metric must be square");
  if (!m.allFinite())
    fail(ErrorCode::NonPositiveDefinite, "metric not finite at " + point_string(q));
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + m.cwiseAbs().maxCoeff()))
    fail(ErrorCode::NonPositiveDefinite, "metric not symmetric at " + point_string(q));
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success)
    fail(ErrorCode::NonPositiveDefinite, "metric not positive definite at " + point_string(q));
}

}  // namespace

bool Domain::contains(const Vector& q) const {
  if (q.size() != dim()) return false;
  for (int i = 0; i < dim(); ++i) {
    const Axis& ax = axes_[i];
    if (ax.periodic) continue;  // periodic coordinates are unwrapped freely
    if (!(q(i) > ax.lo && q(i) < ax.hi)) return false;
  }
  return true;
}

bool Domain::interior(const Vector& q, const std::vector<double>& margin) const {
  if (!contains(q)) return false;
  for (int i = 0; i < dim(); ++i) {
    const Axis& ax = axes_[i];
    if (ax.periodic) continue;
    if (!(q(i) - margin[i] > ax.lo && q(i) + margin[i] < ax.hi)) return false;
  }
  return true;
}

void Domain::require_inside(const Vector& q) const {
  if (q.size() != dim())
    fail(ErrorCode::InvalidArgument, "point dimension mismatch: got " + std::to_string(q.size()) +
                                         ", chart has " + std::to_string(dim()));
  if (!contains(q)) fail(ErrorCode::PointOutsideDomain, "point " + point_string(q));
}

Vector Domain::wrapped_difference(const Vector& to, const Vector& from) const {
  Vector d = to - from;
  for (int i = 0; i < dim(); ++i) {
    const Axis& ax = axes_[i];
    if (!ax.periodic) continue;
    const double L = ax.length();
    d(i) -= L * std::ceil(d(i) / L - 0.5);  // half period lands on +L/2
  }
  return d;
}

MetricChart MetricChart::analytic(std::string name, Domain domain, MetricFn eval, MetricDerivFn d1,
                                  MetricDeriv2Fn d2) {
  MetricChart c;
  c.name_ = std::move(name);
  c.domain_ = std::move(domain);
  c.source_ = JetSource::Analytic;
  c.eval_ = std::move(eval);
  c.d1_ = std::move(d1);
  c.d2_ = std::move(d2);
  return c;
}

MetricChart MetricChart::numeric(std::string name, Domain domain, MetricFn eval) {
  MetricChart c;
  c.name_ = std::move(name);
  c.domain_ = std::move(domain);
  c.source_ = JetSource::Numeric;
  c.eval_ = std::move(eval);
  return c;
}

Matrix MetricChart::metric(const Vector& q) const {
  domain_.require_inside(q);
  Matrix m = eval_(q);
  check_spd(m, q);
  return m;
}

MetricJet MetricChart::jet(const Vector& q, int order) const {
  if (order < 0 || order > 2) fail(ErrorCode::InvalidArgument, "jet order must be 0, 1 or 2");
  domain_.require_inside(q);

  const int n = dim();
  MetricJet jet;
  jet.order = order;

  if (source_ == JetSource::Numeric && order > 0) {
    // Widest stencil offset per axis: the Richardson pair uses h and h/2.
    std::vector<double> margin(n);
    for (int i = 0; i < n; ++i)
      margin[i] = (order >= 2) ? fd::second_step(q(i)) : fd::first_step(q(i));
    if (!domain_.interior(q, margin))
      fail(ErrorCode::StencilClipsBoundary,
           "finite-difference stencil at " + point_string(q) + " clips the chart boundary");
  }

  jet.value = eval_(q);
  check_spd(jet.value, q);
  if (order == 0) return jet;

  jet.first.resize(n);
  if (source_ == JetSource::Analytic) {
    for (int c = 0; c < n; ++c) jet.first[c] = d1_(q, c);
  } else {
    for (int c = 0; c < n; ++c)
      jet.first[c] = fd::first_derivative(eval_, q, c, fd::first_step(q(c)));
  }
  if (order == 1) return jet;

  jet.second.assign(n, std::vector<Matrix>(n));
  if (source_ == JetSource::Analytic) {
    for (int c = 0; c < n; ++c)
      for (int d = c; d < n; ++d) {
        jet.second[c][d] = d2_(q, c, d);
        if (d != c) jet.second[d][c] = jet.second[c][d];
      }
  } else {
    for (int c = 0; c < n; ++c) {
      jet.second[c][c] = fd::second_derivative(eval_, q, c, fd::second_step(q(c)));
      for (int d = c + 1; d < n; ++d) {
        jet.second[c][d] =
            fd::mixed_derivative(eval_, q, c, d, fd::second_step(q(c)), fd::second_step(q(d)));
        jet.second[d][c] = jet.second[c][d];
      }
    }
  }
  return jet;
}

}  // namespace qmpkit
