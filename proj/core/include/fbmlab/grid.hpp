#pragma once

#include <cstddef>
#include <vector>

namespace fbmlab {

struct P2 {
  double x = 0.0;
  double y = 0.0;
};

// Strictly increasing set of 1-D observation times.
struct Grid1D {
  std::vector<double> points;

  explicit Grid1D(std::vector<double> pts);

  // n points lo + k*(hi-lo)/n, k = 1..n; optionally prepends lo itself.
  static Grid1D uniform(double lo, double hi, std::size_t n,
                        bool include_lo = false);

  std::size_t size() const { return points.size(); }
};

// Masked lattice of 2-D observation points.
struct Grid2D {
  double lattice_step;
  std::vector<P2> points;

  Grid2D(double step, std::vector<P2> pts);

  std::size_t size() const { return points.size(); }
};

}  // namespace fbmlab
