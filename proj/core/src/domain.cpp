#include "fbmlab/domain.hpp"

#include <cmath>
#include <stdexcept>

#include "fbmlab/common.hpp"

namespace fbmlab {

const char* shape_name(Shape s) {
  switch (s) {
    case Shape::Interval: return "interval";
    case Shape::Square: return "square";
    case Shape::Cone: return "cone";
    case Shape::Triangle: return "triangle";
    case Shape::Band: return "band";
  }
  return "?";
}

const char* exclude_name(Exclude e) {
  switch (e) {
    case Exclude::None: return "none";
    case Exclude::UnitBall: return "unit_ball";
    case Exclude::UnitSquare: return "unit_square";
    case Exclude::Hyperbola: return "hyperbola";
  }
  return "?";
}

Shape shape_from_name(const std::string& name) {
  if (name == "interval") return Shape::Interval;
  if (name == "square") return Shape::Square;
  if (name == "cone") return Shape::Cone;
  if (name == "triangle") return Shape::Triangle;
  if (name == "band") return Shape::Band;
  throw std::invalid_argument("unknown domain shape: " + name);
}

Exclude exclude_from_name(const std::string& name) {
  if (name == "none") return Exclude::None;
  if (name == "unit_ball") return Exclude::UnitBall;
  if (name == "unit_square") return Exclude::UnitSquare;
  if (name == "hyperbola") return Exclude::Hyperbola;
  throw std::invalid_argument("unknown exclude descriptor: " + name);
}

DomainSpec DomainSpec::interval(double lo, double hi, double T, int n,
                                Exclude excl) {
  DomainSpec d;
  d.shape = Shape::Interval;
  d.lo = lo;
  d.hi = hi;
  d.T_scale = T;
  d.n_grid = n;
  d.exclude = excl;
  d.validate();
  return d;
}

DomainSpec DomainSpec::square(double T, int m, Exclude excl) {
  DomainSpec d;
  d.shape = Shape::Square;
  d.T_scale = T;
  d.n_grid = m;
  d.exclude = excl;
  d.validate();
  return d;
}

DomainSpec DomainSpec::cone(double a, double T, int m, Exclude excl) {
  DomainSpec d;
  d.shape = Shape::Cone;
  d.cone_a = a;
  d.T_scale = T;
  d.n_grid = m;
  d.exclude = excl;
  d.validate();
  return d;
}

DomainSpec DomainSpec::triangle(double Ttilde, int m) {
  DomainSpec d;
  d.shape = Shape::Triangle;
  d.T_scale = Ttilde;
  d.n_grid = m;
  d.validate();
  return d;
}

DomainSpec DomainSpec::band(double c, double d_, double a, int m) {
  DomainSpec d;
  d.shape = Shape::Band;
  d.band_c = c;
  d.band_d = d_;
  d.band_a = a;
  d.n_grid = m;
  d.validate();
  return d;
}

void DomainSpec::validate() const {
  if (!(T_scale > 0.0)) throw std::invalid_argument("DomainSpec: T_scale must be positive");
  if (n_grid < 1) throw std::invalid_argument("DomainSpec: n_grid must be >= 1");
  switch (shape) {
    case Shape::Interval:
      if (!(hi > lo)) throw std::invalid_argument("DomainSpec: interval needs hi > lo");
      break;
    case Shape::Cone:
      if (!(cone_a > 0.0 && cone_a <= 1.0)) {
        throw std::invalid_argument("DomainSpec: cone needs 0 < a <= 1");
      }
      break;
    case Shape::Band:
      if (!(band_a > 0.0 && band_a < 1.0)) {
        throw std::invalid_argument("DomainSpec: band needs 0 < a < 1");
      }
      if (!(band_d > band_c)) {
        throw std::invalid_argument("DomainSpec: band needs d > c");
      }
      break;
    default:
      break;
  }
}

bool DomainSpec::contains1(double s) const {
  if (shape != Shape::Interval) return false;
  return s > T_scale * lo && s < T_scale * hi;
}

bool DomainSpec::contains2(P2 s) const {
  switch (shape) {
    case Shape::Square:
      return s.x > 0.0 && s.x <= T_scale && s.y > 0.0 && s.y <= T_scale;
    case Shape::Cone: {
      if (!(s.x > 0.0 && s.x <= T_scale && s.y > 0.0 && s.y <= T_scale)) {
        return false;
      }
      const double ratio = s.x / s.y;
      return ratio > cone_a && ratio < 1.0 / cone_a;
    }
    case Shape::Triangle:
      return s.x > 0.0 && s.y > 0.0 && s.x + s.y < 2.0 * T_scale;
    case Shape::Band: {
      if (!(std::fabs(s.x - s.y) < std::fabs(std::log(band_a)))) return false;
      if (!(s.x < band_d && s.y < band_d)) return false;
      return s.x >= band_c || s.y >= band_c;
    }
    default:
      return false;
  }
}

bool DomainSpec::in_exclude1(double s) const {
  switch (exclude) {
    case Exclude::None: return false;
    case Exclude::UnitBall: return std::fabs(s) < 1.0;
    default:
      throw std::invalid_argument("exclude descriptor not valid for 1-D domains");
  }
}

bool DomainSpec::in_exclude2(P2 s) const {
  switch (exclude) {
    case Exclude::None: return false;
    case Exclude::UnitSquare: return s.x < 1.0 && s.y < 1.0;
    case Exclude::Hyperbola: return s.x * s.y < 1.0;
    case Exclude::UnitBall: return s.x * s.x + s.y * s.y < 1.0;
  }
  return false;
}

Grid1D DomainSpec::grid1() const {
  if (shape != Shape::Interval) {
    throw std::invalid_argument("grid1() requires an interval domain");
  }
  return Grid1D::uniform(T_scale * lo, T_scale * hi,
                         static_cast<std::size_t>(n_grid));
}

Grid2D DomainSpec::grid2() const {
  std::vector<P2> pts;
  double step = 0.0;
  const int m = n_grid;
  switch (shape) {
    case Shape::Square:
    case Shape::Cone: {
      step = T_scale / m;
      for (int i = 1; i <= m; ++i) {
        for (int j = 1; j <= m; ++j) {
          const P2 p{step * i, step * j};
          if (contains2(p)) pts.push_back(p);
        }
      }
      break;
    }
    case Shape::Triangle: {
      step = 2.0 * T_scale / m;
      for (int i = 1; i < m; ++i) {
        for (int j = 1; j < m - i; ++j) {
          pts.push_back({step * i, step * j});
        }
      }
      // lattice interior can be empty for tiny m; fall back to the centroid
      if (pts.empty()) pts.push_back({2.0 * T_scale / 3.0, 2.0 * T_scale / 3.0});
      break;
    }
    case Shape::Band: {
      step = (band_d > 0.0 ? band_d : band_d - band_c) / m;
      const double lo_t = std::min(0.0, band_c);
      for (double x = lo_t + step; x < band_d; x += step) {
        for (double y = lo_t + step; y < band_d; y += step) {
          const P2 p{x, y};
          if (contains2(p)) pts.push_back(p);
        }
      }
      break;
    }
    default:
      throw std::invalid_argument("grid2() requires a 2-D domain");
  }
  if (pts.empty()) throw std::invalid_argument("DomainSpec: empty grid");
  return Grid2D(step, std::move(pts));
}

std::string DomainSpec::describe() const {
  std::string out = shape_name(shape);
  switch (shape) {
    case Shape::Interval:
      out += "(" + fmt_double(lo) + "," + fmt_double(hi) + ")";
      break;
    case Shape::Cone:
      out += "(a=" + fmt_double(cone_a) + ")";
      break;
    case Shape::Band:
      out += "(c=" + fmt_double(band_c) + ",d=" + fmt_double(band_d) +
             ",a=" + fmt_double(band_a) + ")";
      break;
    default:
      break;
  }
  out += " T=" + fmt_double(T_scale) + " n_grid=" + std::to_string(n_grid);
  if (exclude != Exclude::None) {
    out += " U0=" + std::string(exclude_name(exclude));
  }
  return out;
}

U0Split split_u0(const DomainSpec& domain, const Grid1D& grid) {
  U0Split split;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    (domain.in_exclude1(grid.points[i]) ? split.inside : split.outside)
        .push_back(i);
  }
  return split;
}

U0Split split_u0(const DomainSpec& domain, const Grid2D& grid) {
  U0Split split;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    (domain.in_exclude2(grid.points[i]) ? split.inside : split.outside)
        .push_back(i);
  }
  return split;
}

}  // namespace fbmlab
