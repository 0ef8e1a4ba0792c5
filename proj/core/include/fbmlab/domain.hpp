#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fbmlab/grid.hpp"

namespace fbmlab {

enum class Shape { Interval, Square, Cone, Triangle, Band };
enum class Exclude { None, UnitBall, UnitSquare, Hyperbola };

const char* shape_name(Shape s);
const char* exclude_name(Exclude e);
Shape shape_from_name(const std::string& name);
Exclude exclude_from_name(const std::string& name);

// A discretized observation domain.
//
// Interval: T * (lo, hi) on the line. Square: (0, T]^2. Cone: the sector
// {a < s1/s2 < 1/a} cut to (0, T]^2. Triangle: {t1,t2 > 0, t1+t2 < 2T}
// (dual coordinates). Band: {|t1-t2| < |ln a|, t_i < d, t1 >= c or t2 >= c}
// (dual of the cone; c,d in dual time, T_scale ignored).
//
// n_grid is the number of 1-D points for Interval, the per-axis lattice
// resolution otherwise. `exclude` names the U0 cut used by the reduced
// events.
struct DomainSpec {
  Shape shape = Shape::Interval;
  double lo = 0.0, hi = 1.0;   // Interval
  double cone_a = 1.0;         // Cone: 0 < a <= 1
  double band_c = 0.0, band_d = 1.0, band_a = 0.5;  // Band
  double T_scale = 1.0;
  int n_grid = 1;
  Exclude exclude = Exclude::None;

  static DomainSpec interval(double lo, double hi, double T, int n,
                             Exclude excl = Exclude::None);
  static DomainSpec square(double T, int m, Exclude excl = Exclude::None);
  static DomainSpec cone(double a, double T, int m,
                         Exclude excl = Exclude::None);
  static DomainSpec triangle(double Ttilde, int m);
  static DomainSpec band(double c, double d, double a, int m);

  void validate() const;
  bool is_1d() const { return shape == Shape::Interval; }

  // Region membership of the scaled (continuous) domain.
  bool contains1(double s) const;
  bool contains2(P2 s) const;
  bool in_exclude1(double s) const;
  bool in_exclude2(P2 s) const;

  Grid1D grid1() const;
  Grid2D grid2() const;

  std::string describe() const;
};

// Index split of a grid into the U0 part and its complement.
struct U0Split {
  std::vector<std::size_t> inside;
  std::vector<std::size_t> outside;
};

U0Split split_u0(const DomainSpec& domain, const Grid1D& grid);
U0Split split_u0(const DomainSpec& domain, const Grid2D& grid);

}  // namespace fbmlab
