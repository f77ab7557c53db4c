#pragma once

#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace qmpkit::fd {

// Central differences with one Richardson extrapolation.
//
// Step sizes balance truncation against roundoff for the extrapolated
// stencils: eps^(1/3) for first derivatives, eps^(1/6) for second ones
// (a single eps^(1/3) step would leave ~1e-4 roundoff in second
// derivatives, which the numeric-vs-analytic jet contract cannot absorb).
inline double first_step(double coord) {
  static const double base = std::cbrt(std::numeric_limits<double>::epsilon());
  return base * std::max(1.0, std::abs(coord));
}

inline double second_step(double coord) {
  static const double base = std::pow(std::numeric_limits<double>::epsilon(), 1.0 / 6.0);
  return base * std::max(1.0, std::abs(coord));
}

template <class F>
auto first_derivative(F&& f, Eigen::VectorXd q, int axis, double h) {
  const double q0 = q(axis);
  auto at = [&](double x) {
    q(axis) = x;
    return f(q);
  };
  auto d = [&](double step) {
    auto hi = at(q0 + step);
    auto lo = at(q0 - step);
    return ((hi - lo) / (2.0 * step)).eval();
  };
  auto coarse = d(h);
  auto fine = d(h / 2.0);
  q(axis) = q0;
  return ((4.0 * fine - coarse) / 3.0).eval();
}

template <class F>
auto second_derivative(F&& f, Eigen::VectorXd q, int axis, double h) {
  const double q0 = q(axis);
  auto at = [&](double x) {
    q(axis) = x;
    return f(q);
  };
  auto center = at(q0);
  auto d = [&](double step) {
    auto hi = at(q0 + step);
    auto lo = at(q0 - step);
    return ((hi - 2.0 * center + lo) / (step * step)).eval();
  };
  auto coarse = d(h);
  auto fine = d(h / 2.0);
  q(axis) = q0;
  return ((4.0 * fine - coarse) / 3.0).eval();
}

template <class F>
auto mixed_derivative(F&& f, Eigen::VectorXd q, int ax_a, int ax_b, double ha, double hb) {
  const double a0 = q(ax_a);
  const double b0 = q(ax_b);
  auto at = [&](double a, double b) {
    q(ax_a) = a;
    q(ax_b) = b;
    return f(q);
  };
  auto d = [&](double sa, double sb) {
    auto pp = at(a0 + sa, b0 + sb);
    auto pm = at(a0 + sa, b0 - sb);
    auto mp = at(a0 - sa, b0 + sb);
    auto mm = at(a0 - sa, b0 - sb);
    return ((pp - pm - mp + mm) / (4.0 * sa * sb)).eval();
  };
  auto coarse = d(ha, hb);
  auto fine = d(ha / 2.0, hb / 2.0);
  q(ax_a) = a0;
  q(ax_b) = b0;
  return ((4.0 * fine - coarse) / 3.0).eval();
}

// Scalar-valued variants (double / complex), where expression templates above
// would reject plain arithmetic types.
template <class F>
auto first_derivative_scalar(F&& f, Eigen::VectorXd q, int axis, double h) {
  const double q0 = q(axis);
  auto at = [&](double x) {
    q(axis) = x;
    return f(q);
  };
  auto d = [&](double step) { return (at(q0 + step) - at(q0 - step)) / (2.0 * step); };
  auto coarse = d(h);
  auto fine = d(h / 2.0);
  q(axis) = q0;
  return (4.0 * fine - coarse) / 3.0;
}

template <class F>
auto second_derivative_scalar(F&& f, Eigen::VectorXd q, int axis, double h) {
  const double q0 = q(axis);
  auto at = [&](double x) {
    q(axis) = x;
    return f(q);
  };
  auto center = at(q0);
  auto d = [&](double step) {
    return (at(q0 + step) - 2.0 * center + at(q0 - step)) / (step * step);
  };
  auto coarse = d(h);
  auto fine = d(h / 2.0);
  q(axis) = q0;
  return (4.0 * fine - coarse) / 3.0;
}

template <class F>
auto mixed_derivative_scalar(F&& f, Eigen::VectorXd q, int ax_a, int ax_b, double ha, double hb) {
  const double a0 = q(ax_a);
  const double b0 = q(ax_b);
  auto at = [&](double a, double b) {
    q(ax_a) = a;
    q(ax_b) = b;
    return f(q);
  };
  auto d = [&](double sa, double sb) {
    return (at(a0 + sa, b0 + sb) - at(a0 + sa, b0 - sb) - at(a0 - sa, b0 + sb) +
            at(a0 - sa, b0 - sb)) /
           (4.0 * sa * sb);
  };
  auto coarse = d(ha, hb);
  auto fine = d(ha / 2.0, hb / 2.0);
  q(ax_a) = a0;
  q(ax_b) = b0;
  return (4.0 * fine - coarse) / 3.0;
}

}  // namespace qmpkit::fd
