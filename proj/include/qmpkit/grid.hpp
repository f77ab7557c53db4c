#pragma once

#include <vector>

#include "qmpkit/chart.hpp"

namespace qmpkit {

// Uniform tensor grid request. Open axes are excised by `guard_cells` grid
// cells at each end (chart singularities such as sphere poles stay outside
// the grid); periodic axes cover one full period without a duplicate node.
struct GridSpec {
  std::vector<int> nodes;
  int guard_cells = 2;
};

// Realized grid: cell-centered nodes on open axes (zero-flux guard faces),
// plain uniform nodes on periodic axes. Row-major flattening, axis 0 slowest.
class UniformGrid {
public:
  static UniformGrid build(const Domain& domain, const GridSpec& spec);

  int dim() const { return static_cast<int>(coords_.size()); }
  int axis_nodes(int a) const { return static_cast<int>(coords_[a].size()); }
  double spacing(int a) const { return spacing_[a]; }
  bool periodic(int a) const { return periodic_[a]; }
  const std::vector<double>& axis_coords(int a) const { return coords_[a]; }

  long total() const { return total_; }
  double cell_volume() const { return cell_volume_; }

  Vector node(long flat) const;
  long flat_index(const std::vector<int>& idx) const;
  std::vector<int> multi_index(long flat) const;

  // Flat index of the neighbor one step along `axis`; -1 past an open end.
  long neighbor(long flat, int axis, int step) const;

private:
  std::vector<std::vector<double>> coords_;
  std::vector<double> spacing_;
  std::vector<bool> periodic_;
  std::vector<long> stride_;
  long total_ = 0;
  double cell_volume_ = 1.0;
};

}  // namespace qmpkit
