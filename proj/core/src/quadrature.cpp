#include "fbmlab/quadrature.hpp"

#include <cmath>

#include "fbmlab/kernels.hpp"

namespace fbmlab {

namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double m,
                   double b, double fa, double fm, double fb, double whole,
                   double rel_tol, double abs_tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double h12 = (b - a) / 12.0;
  const double left = h12 * (fa + 4.0 * flm + fm);
  const double right = h12 * (fm + 4.0 * frm + fb);
  const double s2 = left + right;
  const double err = s2 - whole;
  if (depth <= 0 ||
      std::fabs(err) <= 15.0 * std::max(abs_tol, rel_tol * std::fabs(s2))) {
    return s2 + err / 15.0;
  }
  return simpson_rec(f, a, lm, m, fa, flm, fm, left, rel_tol, abs_tol * 0.5,
                     depth - 1) +
         simpson_rec(f, m, rm, b, fm, frm, fb, right, rel_tol, abs_tol * 0.5,
                     depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double rel_tol, double abs_tol,
                        int max_depth) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, m, b, fa, fm, fb, whole, rel_tol, abs_tol,
                     max_depth);
}

namespace {

// Integral over v in [0,b] of fbm_cov(H, u, v) (same-sign chart) or
// fbm_cov(H, -u, v) (mixed chart); splits at the v = u kink when inside.
double inner_integral(const Hurst& H, double u, double b, bool mixed,
                      double rel_tol) {
  const auto g = [&](double v) {
    return fbm_cov(H, mixed ? -u : u, v);
  };
  if (!mixed && u > 0.0 && u < b) {
    return adaptive_simpson(g, 0.0, u, rel_tol) +
           adaptive_simpson(g, u, b, rel_tol);
  }
  return adaptive_simpson(g, 0.0, b, rel_tol);
}

}  // namespace

double ifbm_cov_quadrature(const Hurst& H, double s, double t,
                           double rel_tol) {
  if (s == 0.0 || t == 0.0) return 0.0;
  const double a = std::fabs(s);
  const double b = std::fabs(t);
  const bool same_sign = (s > 0.0) == (t > 0.0);
  const double inner_tol = rel_tol * 0.25;
  const auto outer_f = [&](double u) {
    return inner_integral(H, u, b, !same_sign, inner_tol);
  };
  double result;
  if (same_sign && b < a) {
    // the inner integral loses its interior kink past u = b
    result = adaptive_simpson(outer_f, 0.0, b, rel_tol) +
             adaptive_simpson(outer_f, b, a, rel_tol);
  } else {
    result = adaptive_simpson(outer_f, 0.0, a, rel_tol);
  }
  return same_sign ? result : -result;
}

}  // namespace fbmlab
