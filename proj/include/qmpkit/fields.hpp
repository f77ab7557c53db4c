#pragma once

#include <complex>
#include <functional>

#include "qmpkit/chart.hpp"

namespace qmpkit {

using Complex = std::complex<double>;

// A complex scalar function on a chart, with optional closed-form partials.
// Missing partials fall back to the shared finite-difference engine.
class ScalarField {
public:
  using EvalFn = std::function<Complex(const Vector&)>;
  using GradFn = std::function<Complex(const Vector&, int)>;          // (q, b) -> d_b psi
  using HessFn = std::function<Complex(const Vector&, int, int)>;     // (q, b, c) -> d_b d_c psi

  ScalarField() = default;
  explicit ScalarField(EvalFn eval) : eval_(std::move(eval)) {}
  ScalarField(EvalFn eval, GradFn grad) : eval_(std::move(eval)), grad_(std::move(grad)) {}
  ScalarField(EvalFn eval, GradFn grad, HessFn hess)
      : eval_(std::move(eval)), grad_(std::move(grad)), hess_(std::move(hess)) {}

  Complex operator()(const Vector& q) const { return eval_(q); }
  Complex gradient(const Vector& q, int axis) const;
  Complex hessian(const Vector& q, int a, int b) const;

  bool has_analytic_gradient() const { return static_cast<bool>(grad_); }

private:
  EvalFn eval_;
  GradFn grad_;
  HessFn hess_;
};

}  // namespace qmpkit
