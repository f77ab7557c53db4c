#include "qmpkit/grid.hpp"

#include <cmath>

namespace qmpkit {

UniformGrid UniformGrid::build(const Domain& domain, const GridSpec& spec) {
  const int n = domain.dim();
  if (static_cast<int>(spec.nodes.size()) != n)
    fail(ErrorCode::InvalidArgument, "grid spec has " + std::to_string(spec.nodes.size()) +
                                         " axes, chart has " + std::to_string(n));
  if (spec.guard_cells < 1) fail(ErrorCode::InvalidArgument, "guard_cells must be >= 1");

  UniformGrid g;
  g.coords_.resize(n);
  g.spacing_.resize(n);
  g.periodic_.resize(n);
  g.stride_.resize(n);
  g.total_ = 1;
  g.cell_volume_ = 1.0;

  for (int a = 0; a < n; ++a) {
    const Axis& ax = domain.axis(a);
    const int N = spec.nodes[a];
    if (N < 16) fail(ErrorCode::InvalidArgument, "node count must be >= 16 per axis");
    if (!std::isfinite(ax.lo) || !std::isfinite(ax.hi))
      fail(ErrorCode::GuardViolation,
           "axis " + std::to_string(a + 1) + " is unbounded; grids need a compact chart");
    g.periodic_[a] = ax.periodic;
    std::vector<double>& coords = g.coords_[a];
    coords.resize(N);
    if (ax.periodic) {
      const double h = ax.length() / N;
      for (int i = 0; i < N; ++i) coords[i] = ax.lo + i * h;
      g.spacing_[a] = h;
    } else {
      // Cell-centered with `guard_cells` excised cells against each end; the
      // outermost faces carry no flux, so chart singularities at the ends
      // (sphere poles) never get evaluated.
      const double h = ax.length() / (N + 2 * spec.guard_cells);
      for (int i = 0; i < N; ++i) coords[i] = ax.lo + (spec.guard_cells + i + 0.5) * h;
      g.spacing_[a] = h;
    }
    g.cell_volume_ *= g.spacing_[a];
    g.total_ *= N;
  }

  long stride = 1;
  for (int a = n - 1; a >= 0; --a) {
    g.stride_[a] = stride;
    stride *= static_cast<long>(g.coords_[a].size());
  }
  return g;
}

Vector UniformGrid::node(long flat) const {
  const int n = dim();
  Vector q(n);
  for (int a = 0; a < n; ++a) {
    const long i = (flat / stride_[a]) % axis_nodes(a);
    q(a) = coords_[a][i];
  }
  return q;
}

long UniformGrid::flat_index(const std::vector<int>& idx) const {
  long flat = 0;
  for (int a = 0; a < dim(); ++a) flat += stride_[a] * idx[a];
  return flat;
}

std::vector<int> UniformGrid::multi_index(long flat) const {
  std::vector<int> idx(dim());
  for (int a = 0; a < dim(); ++a) idx[a] = static_cast<int>((flat / stride_[a]) % axis_nodes(a));
  return idx;
}

long UniformGrid::neighbor(long flat, int axis, int step) const {
  const int N = axis_nodes(axis);
  const int i = static_cast<int>((flat / stride_[axis]) % N);
  int j = i + step;
  if (periodic_[axis]) {
    j = ((j % N) + N) % N;
  } else if (j < 0 || j >= N) {
    return -1;
  }
  return flat + static_cast<long>(j - i) * stride_[axis];
}

}  // namespace qmpkit
