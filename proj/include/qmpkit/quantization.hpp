#pragma once

#include <cstdint>
#include <optional>

#include "qmpkit/chart.hpp"
#include "qmpkit/constants.hpp"
#include "qmpkit/fields.hpp"
#include "qmpkit/grid.hpp"

namespace qmpkit {

// Quantum-mechanical potential of the DeWitt-ordered Hamiltonian at a point:
//   v_dw = -(hbar^2/2m) g^(-1/4) d_a( omega^ab d_b g^(1/4) ),   g = det omega
// with plain partial derivatives; chart-dependent by construction.
//
// nu_correction_density = (hbar^2/8m) d_a d_b omega^ab, the per-unit-(nu-2)
// shift of the wider ordering family.
struct QmpValue {
  Vector point;
  double v_dw = 0.0;
  double nu_correction_density = 0.0;
};

QmpValue qmp_dewitt(const MetricChart& chart, const Constants& c, const Vector& q);

// v_nu = v_dw + (nu - 2) * nu_correction_density; nu = 2 is DeWitt ordering.
double qmp_nu(const MetricChart& chart, const Constants& c, const Vector& q, double nu);

// Momentum operator component along `axis`:
//   p_b psi = -i hbar ( d_b psi + 1/4 (d_b ln g) psi )
// Hermitian under the measure g^(1/2) d^n q.
Complex apply_momentum(const MetricChart& chart, const Constants& c, const ScalarField& psi,
                       const Vector& q, int axis);

// Laplace-Beltrami operator: g^(-1/2) d_a ( g^(1/2) omega^ab d_b psi ).
Complex apply_laplace_beltrami(const MetricChart& chart, const ScalarField& psi, const Vector& q);

enum class HamiltonianVariant : std::int32_t { Schroedinger = 0, DeWitt = 1, NuFamily = 2 };

// H psi at a point.
//   Schroedinger: -(hbar^2/2m) Lap psi + V psi
//   DeWitt:       adds v_dw psi
//   NuFamily:     adds v_nu psi
Complex apply_hamiltonian(const MetricChart& chart, const Constants& c, HamiltonianVariant variant,
                          const ScalarField& psi, const Vector& q, double nu = 2.0,
                          const ScalarField* v_ext = nullptr);

// Mean energy of a normalized state, written with the measure-Hermitian
// momenta so that it reproduces <psi, H_DW psi> after integration by parts:
//   E[psi] = Int g^(1/2) d^n q { (1/2m) (p_a psi)^* omega^ab (p_b psi) + |psi|^2 V }
// Throws NotNormalized when Int g^(1/2) |psi|^2 strays from 1 beyond norm_tol.
double energy_functional(const MetricChart& chart, const Constants& c, const ScalarField& psi,
                         const UniformGrid& grid, const ScalarField* v_ext = nullptr,
                         double norm_tol = 1e-6);

// Same energy evaluated for a vector of node values with the face-difference
// gradient convention of the spectral discretization; on an eigenvector of
// the discretized DeWitt Hamiltonian this reproduces its eigenvalue exactly.
double energy_functional(const MetricChart& chart, const Constants& c,
                         const Eigen::VectorXcd& psi_values, const UniformGrid& grid,
                         const ScalarField* v_ext = nullptr, double norm_tol = 1e-6);

struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d);

  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// Exact-arithmetic comparison of the curvature coupling (n-1)/(4n) produced
// by quantizing a conformally flat static metric against the conformal value
// 1/6. They coincide exactly when n = 3.
struct ConformalComparison {
  int dim = 0;
  Rational quantization_coefficient;   // (n-1)/(4n)
  Rational conformal_coefficient;      // 1/6
  bool equal = false;
};

ConformalComparison conformal_coefficient(int n);

}  // namespace qmpkit
