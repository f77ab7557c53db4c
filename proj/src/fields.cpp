#include "qmpkit/fields.hpp"

#include "qmpkit/fd.hpp"

namespace qmpkit {

Complex ScalarField::gradient(const Vector& q, int axis) const {
  if (grad_) return grad_(q, axis);
  return fd::first_derivative_scalar(eval_, q, axis, fd::first_step(q(axis)));
}

Complex ScalarField::hessian(const Vector& q, int a, int b) const {
  if (hess_) return hess_(q, a, b);
  if (grad_) {
    // Differentiate the supplied gradient once: cheaper noise than a full
    // second difference of the values.
    auto g = [this, a](const Vector& p) { return grad_(p, a); };
    return fd::first_derivative_scalar(g, q, b, fd::first_step(q(b)));
  }
  if (a == b) return fd::second_derivative_scalar(eval_, q, a, fd::second_step(q(a)));
  return fd::mixed_derivative_scalar(eval_, q, a, b, fd::second_step(q(a)), fd::second_step(q(b)));
}

}  // namespace qmpkit
