#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qmpkit/errors.hpp"

namespace qmpkit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct Axis {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool periodic = false;

  double length() const { return hi - lo; }
};

class Domain {
public:
  Domain() = default;
  explicit Domain(std::vector<Axis> axes) : axes_(std::move(axes)) {}

  static Domain unbounded(int dim) { return Domain(std::vector<Axis>(dim)); }

  int dim() const { return static_cast<int>(axes_.size()); }
  const Axis& axis(int i) const { return axes_.at(i); }
  const std::vector<Axis>& axes() const { return axes_; }

  bool contains(const Vector& q) const;
  // True when every non-periodic coordinate keeps at least `margin[i]` of
  // clearance to the open boundary (finite-difference stencils need room).
  bool interior(const Vector& q, const std::vector<double>& margin) const;
  void require_inside(const Vector& q) const;

  // Difference to - from with periodic axes wrapped into (-L/2, L/2].
  Vector wrapped_difference(const Vector& to, const Vector& from) const;

private:
  std::vector<Axis> axes_;
};

enum class JetSource { Analytic, Numeric };

// Metric components and their partial derivatives at a point.
//   first[c](a,b)     = d_c omega_ab
//   second[c][d](a,b) = d_c d_d omega_ab   (full symmetric table)
struct MetricJet {
  int order = 0;
  Matrix value;
  std::vector<Matrix> first;
  std::vector<std::vector<Matrix>> second;
};

// A coordinate chart carrying a Riemannian metric omega_ab(q).
//
// Analytic charts supply closed-form first and second partials; numeric
// charts get them from Richardson-extrapolated central differences.
class MetricChart {
public:
  using MetricFn = std::function<Matrix(const Vector&)>;
  // (q, c) -> d_c omega
  using MetricDerivFn = std::function<Matrix(const Vector&, int)>;
  // (q, c, d) -> d_c d_d omega
  using MetricDeriv2Fn = std::function<Matrix(const Vector&, int, int)>;

  MetricChart() = default;

  static MetricChart analytic(std::string name, Domain domain, MetricFn eval, MetricDerivFn d1,
                              MetricDeriv2Fn d2);
  static MetricChart numeric(std::string name, Domain domain, MetricFn eval);

  const std::string& name() const { return name_; }
  int dim() const { return domain_.dim(); }
  const Domain& domain() const { return domain_; }
  JetSource jet_source() const { return source_; }

  // Metric at q; checks the domain and positive definiteness.
  Matrix metric(const Vector& q) const;

  // Raw evaluation without domain or definiteness checks (stencil interior use).
  Matrix metric_unchecked(const Vector& q) const { return eval_(q); }

  MetricJet jet(const Vector& q, int order) const;

private:
  std::string name_;
  Domain domain_;
  JetSource source_ = JetSource::Numeric;
  MetricFn eval_;
  MetricDerivFn d1_;
  MetricDeriv2Fn d2_;
};

}  // namespace qmpkit
