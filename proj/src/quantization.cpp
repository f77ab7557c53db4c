#include "qmpkit/quantization.hpp"

#include <cmath>
#include <numeric>

#include "kinetic_form.hpp"

namespace qmpkit {

namespace {

struct MetricDerivatives {
  Matrix inv;
  double det = 0.0;
  Vector log_det_grad;               // L_c = d_c ln det = tr(inv d_c omega)
  std::vector<Matrix> dinv;          // d_c omega^ab = -inv (d_c omega) inv
};

MetricDerivatives metric_derivatives(const MetricJet& jet) {
  const int n = static_cast<int>(jet.value.rows());
  MetricDerivatives md;
  md.inv = jet.value.inverse();
  md.det = jet.value.determinant();
  md.log_det_grad.resize(n);
  md.dinv.resize(n);
  for (int c = 0; c < n; ++c) {
    md.log_det_grad(c) = (md.inv * jet.first[c]).trace();
    md.dinv[c] = -md.inv * jet.first[c] * md.inv;
  }
  return md;
}

}  // namespace

QmpValue qmp_dewitt(const MetricChart& chart, const Constants& c, const Vector& q) {
  c.validate();
  const int n = chart.dim();
  const MetricJet jet = chart.jet(q, 2);
  const MetricDerivatives md = metric_derivatives(jet);

  // v_dw = -(hbar^2/2m) g^(-1/4) d_a(omega^ab d_b g^(1/4)). With u = g^(1/4),
  // d_b u = (1/4) u L_b and the whole bracket reduces to terms in L and dL.
  double t1 = 0.0, t2 = 0.0, t3 = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const double dL =
          (md.dinv[a] * jet.first[b]).trace() + (md.inv * jet.second[a][b]).trace();
      t1 += md.dinv[a](a, b) * md.log_det_grad(b);
      t2 += md.inv(a, b) * dL;
      t3 += md.inv(a, b) * md.log_det_grad(a) * md.log_det_grad(b);
    }
  QmpValue out;
  out.point = q;
  out.v_dw = -c.kinetic_scale() * (0.25 * t1 + 0.25 * t2 + t3 / 16.0);

  // (hbar^2/8m) d_a d_b omega^ab
  double dd = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const Matrix m1 = md.inv * jet.first[a] * md.inv * jet.first[b] * md.inv;
      const Matrix m2 = md.inv * jet.first[b] * md.inv * jet.first[a] * md.inv;
      const Matrix m3 = md.inv * jet.second[a][b] * md.inv;
      dd += m1(a, b) + m2(a, b) - m3(a, b);
    }
  out.nu_correction_density = c.hbar * c.hbar / (8.0 * c.mass) * dd;
  return out;
}

double qmp_nu(const MetricChart& chart, const Constants& c, const Vector& q, double nu) {
  const QmpValue v = qmp_dewitt(chart, c, q);
  return v.v_dw + (nu - 2.0) * v.nu_correction_density;
}

Complex apply_momentum(const MetricChart& chart, const Constants& c, const ScalarField& psi,
                       const Vector& q, int axis) {
  c.validate();
  if (axis < 0 || axis >= chart.dim()) fail(ErrorCode::InvalidArgument, "momentum axis out of range");
  const MetricJet jet = chart.jet(q, 1);
  const MetricDerivatives md = metric_derivatives(jet);
  const Complex dpsi = psi.gradient(q, axis);
  return Complex(0.0, -c.hbar) * (dpsi + 0.25 * md.log_det_grad(axis) * psi(q));
}

Complex apply_laplace_beltrami(const MetricChart& chart, const ScalarField& psi, const Vector& q) {
  const int n = chart.dim();
  const MetricJet jet = chart.jet(q, 1);
  const MetricDerivatives md = metric_derivatives(jet);

  // Lap psi = omega^ab d_a d_b psi + (1/2 L_a omega^ab + d_a omega^ab) d_b psi
  Complex out = 0.0;
  for (int b = 0; b < n; ++b) {
    double drift = 0.0;
    for (int a = 0; a < n; ++a)
      drift += 0.5 * md.log_det_grad(a) * md.inv(a, b) + md.dinv[a](a, b);
    out += drift * psi.gradient(q, b);
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) out += md.inv(a, b) * psi.hessian(q, a, b);
  return out;
}

Complex apply_hamiltonian(const MetricChart& chart, const Constants& c, HamiltonianVariant variant,
                          const ScalarField& psi, const Vector& q, double nu,
                          const ScalarField* v_ext) {
  c.validate();
  Complex out = -c.kinetic_scale() * apply_laplace_beltrami(chart, psi, q);
  double v = 0.0;
  switch (variant) {
    case HamiltonianVariant::Schroedinger: break;
    case HamiltonianVariant::DeWitt: v = qmp_dewitt(chart, c, q).v_dw; break;
    case HamiltonianVariant::NuFamily: v = qmp_nu(chart, c, q, nu); break;
  }
  Complex pot = v;
  if (v_ext) pot += (*v_ext)(q);
  return out + pot * psi(q);
}

double energy_functional(const MetricChart& chart, const Constants& c, const ScalarField& psi,
                         const UniformGrid& grid, const ScalarField* v_ext, double norm_tol) {
  c.validate();
  const int n = chart.dim();
  double energy = 0.0;
  double norm = 0.0;
  for (long i = 0; i < grid.total(); ++i) {
    const Vector q = grid.node(i);
    const MetricJet jet = chart.jet(q, 1);
    const MetricDerivatives md = metric_derivatives(jet);
    const double w = std::sqrt(md.det) * grid.cell_volume();
    const Complex value = psi(q);

    // (p_a psi) / (-i hbar) = d_a psi + (1/4) L_a psi
    Eigen::VectorXcd dpsi(n);
    for (int a = 0; a < n; ++a)
      dpsi(a) = psi.gradient(q, a) + 0.25 * md.log_det_grad(a) * value;

    double kinetic = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        kinetic += md.inv(a, b) * std::real(std::conj(dpsi(a)) * dpsi(b));

    double pot = v_ext ? std::real((*v_ext)(q)) : 0.0;
    energy += w * (c.kinetic_scale() * kinetic + pot * std::norm(value));
    norm += w * std::norm(value);
  }
  if (std::abs(norm - 1.0) > norm_tol)
    fail(ErrorCode::NotNormalized,
         "state norm is " + std::to_string(norm) + " (tolerance " + std::to_string(norm_tol) + ")");
  return energy;
}

double energy_functional(const MetricChart& chart, const Constants& c,
                         const Eigen::VectorXcd& psi_values, const UniformGrid& grid,
                         const ScalarField* v_ext, double norm_tol) {
  c.validate();
  if (psi_values.size() != grid.total())
    fail(ErrorCode::InvalidArgument, "value vector does not match the grid");
  const detail::NodeData data = detail::node_data(chart, grid);

  double norm = 0.0;
  for (long i = 0; i < grid.total(); ++i) norm += data.sqrt_w(i) * std::norm(psi_values(i));
  if (std::abs(norm - 1.0) > norm_tol)
    fail(ErrorCode::NotNormalized,
         "state norm is " + std::to_string(norm) + " (tolerance " + std::to_string(norm_tol) + ")");

  // Face-difference kinetic form, in exact duality with the spectral matrix;
  // the DeWitt potential rides on the diagonal.
  double kinetic = 0.0;
  detail::for_each_kinetic_entry(grid, data, [&](long i, long j, double v) {
    kinetic += v * std::real(std::conj(psi_values(i)) * psi_values(j));
  });

  double diag = 0.0;
  for (long i = 0; i < grid.total(); ++i) {
    const Vector q = grid.node(i);
    double pot = qmp_dewitt(chart, c, q).v_dw;
    if (v_ext) pot += std::real((*v_ext)(q));
    diag += data.sqrt_w(i) * pot * std::norm(psi_values(i));
  }
  return c.kinetic_scale() * kinetic + diag;
}

Rational::Rational(long long n, long long d) : num(n), den(d) {
  if (den == 0) fail(ErrorCode::InvalidArgument, "zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

ConformalComparison conformal_coefficient(int n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "dimension must be >= 1");
  ConformalComparison out;
  out.dim = n;
  out.quantization_coefficient = Rational(n - 1, 4 * n);
  out.conformal_coefficient = Rational(1, 6);
  out.equal = out.quantization_coefficient == out.conformal_coefficient;
  return out;
}

}  // namespace qmpkit
