#include "qmpkit/geometry.hpp"

#include <Eigen/Dense>

namespace qmpkit {

std::vector<Matrix> christoffel_symbols(const MetricJet& jet) {
  if (jet.order < 1) fail(ErrorCode::InvalidArgument, "christoffel_symbols needs a first-order jet");
  const int n = static_cast<int>(jet.value.rows());
  const Matrix inv = jet.value.inverse();

  // Gamma^a_bc = 1/2 omega^ad (d_b omega_dc + d_c omega_bd - d_d omega_bc)
  std::vector<Matrix> gamma(n, Matrix::Zero(n, n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = b; c < n; ++c) {
        double sum = 0.0;
        for (int d = 0; d < n; ++d)
          sum += inv(a, d) * (jet.first[b](d, c) + jet.first[c](b, d) - jet.first[d](b, c));
        gamma[a](b, c) = 0.5 * sum;
        gamma[a](c, b) = gamma[a](b, c);
      }
  return gamma;
}

std::vector<std::vector<Matrix>> christoffel_derivatives(const MetricJet& jet) {
  if (jet.order < 2) fail(ErrorCode::InvalidArgument, "christoffel_derivatives needs a second-order jet");
  const int n = static_cast<int>(jet.value.rows());
  const Matrix inv = jet.value.inverse();

  // d_e omega^ad = -omega^af (d_e omega_fg) omega^gd
  std::vector<Matrix> dinv(n);
  for (int e = 0; e < n; ++e) dinv[e] = -inv * jet.first[e] * inv;

  // d_e Gamma^a_bc, from the product rule on the Christoffel formula.
  std::vector<std::vector<Matrix>> dgamma(n, std::vector<Matrix>(n, Matrix::Zero(n, n)));
  for (int e = 0; e < n; ++e)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = b; c < n; ++c) {
          double sum = 0.0;
          for (int d = 0; d < n; ++d) {
            sum += dinv[e](a, d) * (jet.first[b](d, c) + jet.first[c](b, d) - jet.first[d](b, c));
            sum += inv(a, d) *
                   (jet.second[e][b](d, c) + jet.second[e][c](b, d) - jet.second[e][d](b, c));
          }
          dgamma[e][a](b, c) = 0.5 * sum;
          dgamma[e][a](c, b) = dgamma[e][a](b, c);
        }
  return dgamma;
}

GeometryJet geometry_jet(const MetricChart& chart, const Vector& q) {
  const int n = chart.dim();
  const MetricJet jet = chart.jet(q, 2);

  GeometryJet g;
  g.point = q;
  g.metric = jet.value;
  g.inverse_metric = jet.value.inverse();
  g.det = jet.value.determinant();
  g.christoffel = christoffel_symbols(jet);

  const std::vector<std::vector<Matrix>> dgamma_table = christoffel_derivatives(jet);
  auto dgamma = [&](int e, int a, int b, int c) { return dgamma_table[e][a](b, c); };

  // R^a_bcd = d_c Gamma^a_db - d_d Gamma^a_cb + Gamma^a_ce Gamma^e_db - Gamma^a_de Gamma^e_cb
  g.riemann.assign(n, std::vector<Matrix>(n, Matrix::Zero(n, n)));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = c + 1; d < n; ++d) {
          double r = dgamma(c, a, d, b) - dgamma(d, a, c, b);
          for (int e = 0; e < n; ++e)
            r += g.christoffel[a](c, e) * g.christoffel[e](d, b) -
                 g.christoffel[a](d, e) * g.christoffel[e](c, b);
          g.riemann[a][b](c, d) = r;
          g.riemann[a][b](d, c) = -r;
        }

  // Ricci contraction R_bd = R^a_bad, pinned so the unit 2-sphere gives +2.
  g.ricci = Matrix::Zero(n, n);
  for (int b = 0; b < n; ++b)
    for (int d = 0; d < n; ++d) {
      double sum = 0.0;
      for (int a = 0; a < n; ++a) sum += g.riemann[a][b](a, d);
      g.ricci(b, d) = sum;
    }

  g.scalar_curvature = (g.inverse_metric * g.ricci).trace();
  return g;
}

Matrix GeometryJet::riemann_lower(int a, int b) const {
  const int n = static_cast<int>(metric.rows());
  Matrix out = Matrix::Zero(n, n);
  for (int e = 0; e < n; ++e) out += metric(a, e) * riemann[e][b];
  return out;
}

}  // namespace qmpkit
