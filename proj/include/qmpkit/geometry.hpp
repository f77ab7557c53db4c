#pragma once

#include <vector>

#include "qmpkit/chart.hpp"

namespace qmpkit {

// Curvature data of a chart at a point.
//
// Index conventions:
//   christoffel[a](b,c) = Gamma^a_bc
//   riemann[a][b](c,d)  = R^a_bcd = d_c Gamma^a_db - d_d Gamma^a_cb
//                          + Gamma^a_ce Gamma^e_db - Gamma^a_de Gamma^e_cb
//   ricci(b,d)          = R^a_bad
// The contraction is pinned so that the unit 2-sphere has scalar curvature +2.
struct GeometryJet {
  Vector point;
  Matrix metric;
  Matrix inverse_metric;
  double det = 0.0;
  std::vector<Matrix> christoffel;
  std::vector<std::vector<Matrix>> riemann;
  Matrix ricci;
  double scalar_curvature = 0.0;

  // R_abcd = omega_ae R^e_bcd
  Matrix riemann_lower(int a, int b) const;
};

GeometryJet geometry_jet(const MetricChart& chart, const Vector& q);

// Gamma^a_bc from a first-order metric jet (used by the geodesic integrator,
// which does not need curvature).
std::vector<Matrix> christoffel_symbols(const MetricJet& jet);

// d_e Gamma^a_bc from a second-order jet, as [e][a](b,c). Feeds the Riemann
// tensor and the variational (tangent-map) equation of the geodesic flow.
std::vector<std::vector<Matrix>> christoffel_derivatives(const MetricJet& jet);

}  // namespace qmpkit
