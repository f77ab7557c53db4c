#include "qmpkit/flat_deformation.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/LU>

#include "qmpkit/fd.hpp"

namespace qmpkit {

DeformationField::DeformationField(int dim, double eps, FieldFn f)
    : dim_(dim), eps_(eps), f_(std::move(f)) {
  if (dim < 1) fail(ErrorCode::InvalidArgument, "dimension must be >= 1");
  if (!f_) fail(ErrorCode::InvalidArgument, "deformation field is empty");
}

DeformationField::DeformationField(int dim, double eps, FieldFn f, JacobianFn jac,
                                   DivergenceFn div, std::string label)
    : dim_(dim), eps_(eps), f_(std::move(f)), jac_(std::move(jac)), div_(std::move(div)),
      label_(std::move(label)) {
  if (dim < 1) fail(ErrorCode::InvalidArgument, "dimension must be >= 1");
  if (!f_) fail(ErrorCode::InvalidArgument, "deformation field is empty");
}

Matrix DeformationField::jacobian(const Vector& x) const {
  if (jac_) return jac_(x);
  Matrix j(dim_, dim_);
  for (int b = 0; b < dim_; ++b) j.col(b) = fd::first_derivative(f_, x, b, fd::first_step(x(b)));
  return j;
}

double DeformationField::divergence(const Vector& x) const {
  if (div_) return div_(x);
  return jacobian(x).trace();
}

Vector DeformationField::invert(const Vector& q, double tol, int max_iterations) const {
  if (q.size() != dim_) fail(ErrorCode::InvalidArgument, "dimension mismatch");
  const double scale = std::max(1.0, q.norm());
  Vector x = q;
  double step = std::numeric_limits<double>::infinity();
  for (int i = 0; i < max_iterations; ++i) {
    const Vector next = q - eps_ * f_(x);
    step = (next - x).norm();
    x = next;
    if (step <= tol * scale) break;
  }
  if (step > 1e-10 * scale)
    fail(ErrorCode::NotInvertible, "fixed-point inversion stalled at step " + std::to_string(step));
  return x;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

double parse_number(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(ErrorCode::ParseError, "bad " + what + ": '" + s + "'");
  }
}

}  // namespace

DeformationField DeformationField::from_id(const std::string& id, int dim, double eps) {
  if (dim < 1) fail(ErrorCode::InvalidArgument, "dimension must be >= 1");
  const std::vector<std::string> parts = split(id, ':');
  if (parts.empty()) fail(ErrorCode::InvalidArgument, "empty deformation id");
  const std::string& kind = parts[0];

  if (kind == "sin-x") {
    if (parts.size() != 1) fail(ErrorCode::InvalidArgument, "sin-x takes no parameters");
    auto f = [dim](const Vector& x) {
      Vector out = Vector::Zero(dim);
      out(0) = std::sin(x(0));
      return out;
    };
    auto jac = [dim](const Vector& x) {
      Matrix j = Matrix::Zero(dim, dim);
      j(0, 0) = std::cos(x(0));
      return j;
    };
    auto div = [](const Vector& x) { return std::cos(x(0)); };
    return DeformationField(dim, eps, f, jac, div, "sin-x");
  }

  if (kind == "linear") {
    if (parts.size() != 2) fail(ErrorCode::InvalidArgument, "linear needs matrix entries");
    const std::vector<std::string> entries = split(parts[1], ',');
    if (static_cast<int>(entries.size()) != dim * dim)
      fail(ErrorCode::InvalidArgument, "linear needs dim*dim entries, got " +
                                           std::to_string(entries.size()));
    Matrix a(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        a(i, j) = parse_number(entries[i * dim + j], "matrix entry");
    auto f = [a](const Vector& x) { return (a * x).eval(); };
    auto jac = [a](const Vector&) { return a; };
    auto div = [tr = a.trace()](const Vector&) { return tr; };
    return DeformationField(dim, eps, f, jac, div, id);
  }

  if (kind == "gaussian-bump") {
    if (parts.size() != 2) fail(ErrorCode::InvalidArgument, "gaussian-bump needs a width");
    const double sigma = parse_number(parts[1], "width");
    if (!(sigma > 0.0)) fail(ErrorCode::InvalidArgument, "width must be positive");
    const double s2 = sigma * sigma;
    // f = grad of -exp(-|x|^2 / 2 sigma^2): a radial push away from the origin.
    auto f = [s2](const Vector& x) {
      const double g = std::exp(-x.squaredNorm() / (2.0 * s2));
      return (x * (g / s2)).eval();
    };
    auto jac = [s2](const Vector& x) {
      const double g = std::exp(-x.squaredNorm() / (2.0 * s2));
      const int n = static_cast<int>(x.size());
      Matrix j = Matrix::Identity(n, n) * (g / s2);
      j -= (g / (s2 * s2)) * x * x.transpose();
      return j;
    };
    auto div = [s2](const Vector& x) {
      const double g = std::exp(-x.squaredNorm() / (2.0 * s2));
      const double n = static_cast<double>(x.size());
      return g * (n / s2 - x.squaredNorm() / (s2 * s2));
    };
    return DeformationField(dim, eps, f, jac, div, id);
  }

  fail(ErrorCode::InvalidArgument, "unknown deformation id '" + kind + "'");
}

MetricChart deformed_chart(const DeformationField& field) {
  const int n = field.dim();
  std::ostringstream name;
  name << (n == 2 ? "plane-deformed:" : "flat-deformed:") << field.epsilon() << ":"
       << field.label();
  DeformationField copy = field;
  auto eval = [copy](const Vector& q) {
    const Vector x = copy.invert(q);
    const Matrix m = Matrix::Identity(copy.dim(), copy.dim()) + copy.epsilon() * copy.jacobian(x);
    Eigen::PartialPivLU<Matrix> lu(m);
    const double det = lu.determinant();
    if (!(det > 0.0)) fail(ErrorCode::NotInvertible, "deformation Jacobian is not orientation-preserving");
    const Matrix k = lu.inverse();
    return (k.transpose() * k).eval();
  };
  return MetricChart::numeric(name.str(), Domain::unbounded(n), eval);
}

double qmp_deformation_first_order(const DeformationField& field, const Constants& c,
                                   const Vector& q) {
  c.validate();
  if (q.size() != field.dim()) fail(ErrorCode::InvalidArgument, "dimension mismatch");
  auto div = [&field](const Vector& x) { return field.divergence(x); };
  double lap = 0.0;
  for (int a = 0; a < field.dim(); ++a)
    lap += fd::second_derivative_scalar(div, q, a, fd::second_step(q(a)));
  return 0.5 * field.epsilon() * c.kinetic_scale() * lap;
}

}  // namespace qmpkit
