#pragma once

#include <functional>
#include <string>

#include "qmpkit/chart.hpp"
#include "qmpkit/constants.hpp"

namespace qmpkit {

// A near-identity deformation of flat coordinates, q = x + eps f(x).
class DeformationField {
public:
  using FieldFn = std::function<Vector(const Vector&)>;
  using JacobianFn = std::function<Matrix(const Vector&)>;   // d f^a / d x^b
  using DivergenceFn = std::function<double(const Vector&)>;  // Tr d_a f^a

  DeformationField(int dim, double eps, FieldFn f);
  DeformationField(int dim, double eps, FieldFn f, JacobianFn jac, DivergenceFn div,
                   std::string label = "custom");

  // Catalog: "sin-x", "linear:a11,a12,...", "gaussian-bump:sigma".
  static DeformationField from_id(const std::string& id, int dim, double eps);

  int dim() const { return dim_; }
  double epsilon() const { return eps_; }
  const std::string& label() const { return label_; }

  Vector operator()(const Vector& x) const { return f_(x); }
  // Jacobian d f^a / d x^b (closed form when available, else differences).
  Matrix jacobian(const Vector& x) const;
  double divergence(const Vector& x) const;

  // Invert q = x + eps f(x) by fixed-point iteration x <- q - eps f(x).
  Vector invert(const Vector& q, double tol = 1e-15, int max_iterations = 30) const;

private:
  int dim_;
  double eps_;
  FieldFn f_;
  JacobianFn jac_;
  DivergenceFn div_;
  std::string label_ = "custom";
};

// Chart whose metric is the flat metric pulled back through the deformation:
//   omega_ab(q) = (dx^c/dq^a)(dx^c/dq^b).
MetricChart deformed_chart(const DeformationField& field);

// First order in eps, the DeWitt potential of the deformed chart is
//   v = (eps hbar^2 / 4m) Lap( Tr d f )  evaluated at q;
// the sign and prefactor are validated against the exact potential in tests.
double qmp_deformation_first_order(const DeformationField& field, const Constants& c,
                                   const Vector& q);

}  // namespace qmpkit
