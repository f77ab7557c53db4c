#pragma once

#include <vector>

#include "qmpkit/chart.hpp"
#include "qmpkit/grid.hpp"

// Shared assembly of the discrete kinetic quadratic form
//   K(phi, psi) ~ Int g^(1/2) omega^ab d_a phi^* d_b psi
// used by the spectral discretization and by the grid overload of the energy
// functional, so that the two stay in exact integration-by-parts duality.
//
// Diagonal terms use conservative face differences with face-averaged
// g^(1/2) omega^aa; off-diagonal terms use symmetrized central differences
// (dropped at nodes whose neighbor would cross a zero-flux guard face, which
// only affects charts with metric cross terms next to an open boundary).
namespace qmpkit::detail {

struct NodeData {
  Vector sqrt_w;                 // g^(1/2) * cell volume
  std::vector<Matrix> flux;      // g^(1/2) * omega^ab per node
  bool has_cross = false;
};

inline NodeData node_data(const MetricChart& chart, const UniformGrid& grid) {
  NodeData d;
  const long total = grid.total();
  d.sqrt_w.resize(total);
  d.flux.resize(total);
  for (long i = 0; i < total; ++i) {
    const Matrix m = chart.metric(grid.node(i));
    const double det = m.determinant();
    if (!(det > 0.0))
      fail(ErrorCode::NonPositiveDefinite, "metric determinant not positive on grid");
    const double sq = std::sqrt(det);
    d.sqrt_w(i) = sq * grid.cell_volume();
    d.flux[i] = sq * m.inverse();
    for (int a = 0; a < chart.dim(); ++a)
      for (int b = a + 1; b < chart.dim(); ++b)
        if (std::abs(d.flux[i](a, b)) > 0.0) d.has_cross = true;
  }
  return d;
}

// emit(i, j, c): add c to the form matrix entry K[i][j]. All contributions
// come in symmetric groups, so the assembled K is symmetric by construction.
template <class EmitFn>
void for_each_kinetic_entry(const UniformGrid& grid, const NodeData& data, EmitFn&& emit) {
  const int n = grid.dim();
  const double vol = grid.cell_volume();

  for (long i = 0; i < grid.total(); ++i) {
    for (int a = 0; a < n; ++a) {
      const long j = grid.neighbor(i, a, +1);
      if (j < 0) continue;                      // zero-flux guard face
      if (grid.periodic(a) && j == i) continue; // degenerate wrap
      const double h = grid.spacing(a);
      const double face = 0.5 * (data.flux[i](a, a) + data.flux[j](a, a));
      const double c = vol * face / (h * h);
      emit(i, i, c);
      emit(j, j, c);
      emit(i, j, -c);
      emit(j, i, -c);
    }

    if (!data.has_cross) continue;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) {
        if (data.flux[i](a, b) == 0.0) continue;
        const long ap = grid.neighbor(i, a, +1), am = grid.neighbor(i, a, -1);
        const long bp = grid.neighbor(i, b, +1), bm = grid.neighbor(i, b, -1);
        if (ap < 0 || am < 0 || bp < 0 || bm < 0) continue;
        const double c = vol * data.flux[i](a, b) / (4.0 * grid.spacing(a) * grid.spacing(b));
        // M^ab [ (D_a phi)(D_b psi) + (D_b phi)(D_a psi) ]
        emit(ap, bp, c);
        emit(ap, bm, -c);
        emit(am, bp, -c);
        emit(am, bm, c);
        emit(bp, ap, c);
        emit(bm, ap, -c);
        emit(bp, am, -c);
        emit(bm, am, c);
      }
  }
}

}  // namespace qmpkit::detail
