#include "fbmlab/grid.hpp"

#include <charconv>
#include <cstdlib>
#include <stdexcept>

#include "fbmlab/common.hpp"

namespace fbmlab {

std::string fmt_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

Grid1D::Grid1D(std::vector<double> pts) : points(std::move(pts)) {
  if (points.empty()) throw std::invalid_argument("Grid1D: empty point set");
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i] > points[i - 1])) {
      throw std::invalid_argument("Grid1D: points must be strictly increasing");
    }
  }
}

Grid1D Grid1D::uniform(double lo, double hi, std::size_t n, bool include_lo) {
  if (!(hi > lo)) throw std::invalid_argument("Grid1D::uniform: hi must exceed lo");
  if (n == 0) throw std::invalid_argument("Grid1D::uniform: n must be positive");
  std::vector<double> pts;
  pts.reserve(n + (include_lo ? 1 : 0));
  if (include_lo) pts.push_back(lo);
  const double step = (hi - lo) / static_cast<double>(n);
  for (std::size_t k = 1; k <= n; ++k) {
    pts.push_back(lo + step * static_cast<double>(k));
  }
  return Grid1D(std::move(pts));
}

Grid2D::Grid2D(double step, std::vector<P2> pts)
    : lattice_step(step), points(std::move(pts)) {
  if (!(lattice_step > 0.0)) {
    throw std::invalid_argument("Grid2D: lattice_step must be positive");
  }
  if (points.empty()) throw std::invalid_argument("Grid2D: empty point set");
}

}  // namespace fbmlab
