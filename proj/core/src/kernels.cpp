#include "fbmlab/kernels.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "fbmlab/common.hpp"
#include "fbmlab/normal.hpp"
#include "fbmlab/rng.hpp"

namespace fbmlab {

namespace detail {

double pow_abs(double x, double p) {
  if (x == 0.0) return 0.0;
  return std::exp(p * std::log(std::fabs(x)));
}

double taylor_remainder2(double q, double x) {
  // sum_{k>=2} binom(q,k) (-x)^k / x^2; ratio of consecutive terms is
  // -x (q-k)/(k+1), so |x| <= 1/2 converges geometrically.
  double coef = q * (q - 1.0) / 2.0;  // binom(q,2)
  double xpow = 1.0;
  double sign = 1.0;
  double sum = 0.0;
  for (int k = 2; k < 400; ++k) {
    const double term = sign * coef * xpow;
    sum += term;
    if (std::fabs(term) < 1e-18 * std::fabs(sum) + 1e-300) break;
    coef *= (q - k) / (k + 1.0);
    xpow *= x;
    sign = -sign;
  }
  return sum;
}

double dual_ifbm_corr_naive(const Hurst& H, double t) {
  const double h = H.value();
  const double num = 2.0 * (1.0 + h) * (std::exp(h * t) + std::exp(-h * t)) -
                     (std::exp((1.0 + h) * t) + std::exp(-(1.0 + h) * t)) +
                     pow_abs(std::exp(t / 2.0) - std::exp(-t / 2.0), 2.0 * h + 2.0);
  return num / (2.0 + 4.0 * h);
}

}  // namespace detail

using detail::pow_abs;

double fbm_cov(const Hurst& H, double a, double b) {
  const double twoH = H.two();
  return 0.5 * (pow_abs(a, twoH) + pow_abs(b, twoH) - pow_abs(a - b, twoH));
}

double fbs_cov(const Hurst& H, P2 s, P2 t) {
  return fbm_cov(H, s.x, t.x) * fbm_cov(H, s.y, t.y);
}

namespace {

// E x(u) x(1) for 0 <= u <= 1, u = min/max ratio of same-sign arguments.
double ifbm_unit_cov(const Hurst& H, double u) {
  const double q1 = H.two() + 1.0;
  const double q2 = H.two() + 2.0;
  if (u == 0.0) return 0.0;
  if (u <= 0.5) {
    // u^q1 and (u^2 V(u) - u^q2)/q2 are individually tiny and positive;
    // the direct form would cancel its O(u) parts.
    const double v = detail::taylor_remainder2(q2, u);
    return (pow_abs(u, q1) + (u * u * v - pow_abs(u, q2)) / q2) / (2.0 * q1);
  }
  const double w = -std::expm1(q2 * std::log1p(-u));  // 1 - (1-u)^q2
  return (pow_abs(u, q1) + u - pow_abs(u, q2) / q2 - w / q2) / (2.0 * q1);
}

}  // namespace

double ifbm_cov(const Hurst& H, double s, double t) {
  if (s == 0.0 || t == 0.0) return 0.0;
  const double q1 = H.two() + 1.0;
  const double q2 = H.two() + 2.0;
  const double a = std::fabs(s);
  const double b = std::fabs(t);
  if ((s > 0.0) == (t > 0.0)) {
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);
    return pow_abs(hi, q2) * ifbm_unit_cov(H, lo / hi);
  }
  // Opposite signs: -int_0^a int_0^b [u^2H + v^2H - (u+v)^2H] / 2.
  const double t1 = (b * pow_abs(a, q1) + a * pow_abs(b, q1)) / (2.0 * q1);
  const double t2 =
      (pow_abs(a + b, q2) - pow_abs(a, q2) - pow_abs(b, q2)) / (2.0 * q1 * q2);
  return t2 - t1;
}

double dual_ifbm_corr(const Hurst& H, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("dual_ifbm_corr requires t >= 0");
  const double h = H.value();
  constexpr double kLn2 = 0.6931471805599453;
  if (t < kLn2) return detail::dual_ifbm_corr_naive(H, t);
  // B = [x^{1-H} V(x) + (2H+2) x^H - x^{1+H}] / (2+4H), x = e^{-t}; every
  // term decays and is computed to full relative precision.
  const double x = std::exp(-t);
  const double v = detail::taylor_remainder2(2.0 * h + 2.0, x);
  const double num = std::exp(-(1.0 - h) * t) * v +
                     (2.0 * h + 2.0) * std::exp(-h * t) -
                     std::exp(-(1.0 + h) * t);
  return num / (2.0 + 4.0 * h);
}

double dual_fbm_corr(const Hurst& H, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("dual_fbm_corr requires t >= 0");
  const double h = H.value();
  constexpr double kLn2 = 0.6931471805599453;
  if (t < kLn2) {
    return std::cosh(h * t) - 0.5 * pow_abs(2.0 * std::sinh(t / 2.0), 2.0 * h);
  }
  // cosh(Ht) - (2 sinh(t/2))^2H / 2 = [x^{-H}(1 - (1-x)^2H) + x^H] / 2,
  // x = e^{-t}; the first product is assembled in log space so neither
  // factor overflows.
  const double x = std::exp(-t);
  const double u = -std::expm1(2.0 * h * std::log1p(-x));  // in (0,1)
  const double first = (u > 0.0) ? std::exp(h * t + std::log(u)) : 0.0;
  return 0.5 * (first + std::exp(-h * t));
}

double dual_fbs_corr(const Hurst& H, double t1, double t2) {
  return dual_fbm_corr(H, std::fabs(t1)) * dual_fbm_corr(H, std::fabs(t2));
}

double sech_corr(double t, double scale) {
  const double x = std::exp(-std::fabs(scale * t));
  return 2.0 * x / (1.0 + x * x);
}

double r_poly(const Hurst& H, double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::invalid_argument("r_poly requires x in [0,1]");
  }
  const double twoH = H.two();
  return 1.0 - twoH * x - pow_abs(1.0 - x, twoH) * (1.0 - x * x) +
         twoH * pow_abs(x, twoH + 1.0) - pow_abs(x, twoH + 2.0);
}

double f_drift(const Hurst& H, double x) {
  const double twoH = H.two();
  return pow_abs(x, twoH) + 1.0 - pow_abs(x - 1.0, twoH);
}

double psi_drift(const Hurst& H, double a, P2 s) {
  if (!(a > 0.0)) throw std::invalid_argument("psi_drift requires a > 0");
  return f_drift(H, s.x / a) * f_drift(H, s.y * a);
}

double eta_corr(const Hurst& H, long n) {
  const double twoH = H.two();
  const double an = static_cast<double>(std::labs(n));
  const double x = std::exp2(-an);          // 2^{-|n|}
  const double x2H = std::exp2(-twoH * an);  // 2^{-2H|n|}
  // 1 - (1-x)^2H via expm1: the direct difference underflows for large n.
  const double delta =
      (n == 0) ? 1.0 : -std::expm1(twoH * std::log1p(-x));
  const double base = x2H + delta;
  return base * base / x2H;
}

double phi_norm_sq(const Hurst& H, int N) {
  if (N < 0) throw std::invalid_argument("phi_norm_sq requires N >= 0");
  // sum over |n|,|m| <= N of B(n-m) = sum_k (2N+1-|k|) B(|k|).
  const double width = 2.0 * N + 1.0;
  double sum = width * eta_corr(H, 0);
  for (int k = 1; k <= 2 * N; ++k) {
    sum += 2.0 * (width - k) * eta_corr(H, k);
  }
  return sum;
}

double eta_corr_total(const Hurst& H) {
  const double gamma = 2.0 * std::min(H.value(), H.bar());
  const double ratio = std::exp2(-gamma);
  double sum = eta_corr(H, 0);
  for (long k = 1; k < 200000; ++k) {
    const double b = eta_corr(H, k);
    sum += 2.0 * b;
    // geometric tail estimate with a x4 safety factor
    if (4.0 * b * ratio / (1.0 - ratio) < 1e-12) break;
  }
  return sum;
}

double lemma1_bound(const Hurst& H, double T, double h, double cH) {
  if (!(cH > 0.0)) throw std::invalid_argument("lemma1_bound requires cH > 0");
  if (!(T > 1.0)) throw std::invalid_argument("lemma1_bound requires T > 1");
  if (!(h > 0.0 && h <= 1.0)) {
    throw std::invalid_argument("lemma1_bound requires h in (0,1]");
  }
  return cH * pow_abs(1.0 + 2.0 / (T * T * h), -H.two());
}

// ---------------------------------------------------------------------------

const char* family_name(Family f) {
  switch (f) {
    case Family::Fbm: return "fbm";
    case Family::Fbs: return "fbs";
    case Family::Ifbm: return "ifbm";
    case Family::DualFbm: return "dual_fbm";
    case Family::DualIfbm: return "dual_ifbm";
    case Family::DualFbs: return "dual_fbs";
    case Family::Sech: return "sech";
  }
  return "?";
}

Family family_from_name(const std::string& name) {
  if (name == "fbm") return Family::Fbm;
  if (name == "fbs") return Family::Fbs;
  if (name == "ifbm") return Family::Ifbm;
  if (name == "dual_fbm") return Family::DualFbm;
  if (name == "dual_ifbm") return Family::DualIfbm;
  if (name == "dual_fbs") return Family::DualFbs;
  if (name == "sech") return Family::Sech;
  throw std::invalid_argument("unknown kernel family: " + name);
}

KernelSpec KernelSpec::sech(double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("sech scale must be positive");
  return {Family::Sech, std::nullopt, scale};
}

const Hurst& KernelSpec::H() const {
  if (!hurst) {
    throw std::invalid_argument(std::string(family_name(family)) +
                                " kernel requires a Hurst index");
  }
  return *hurst;
}

double KernelSpec::cov1(double a, double b) const {
  switch (family) {
    case Family::Fbm: return fbm_cov(H(), a, b);
    case Family::Ifbm: return ifbm_cov(H(), a, b);
    case Family::DualFbm: return dual_fbm_corr(H(), std::fabs(a - b));
    case Family::DualIfbm: return dual_ifbm_corr(H(), std::fabs(a - b));
    case Family::Sech: return sech_corr(a - b, sech_scale);
    default:
      throw std::invalid_argument("cov1 called on a two-parameter family");
  }
}

double KernelSpec::cov2(P2 s, P2 t) const {
  switch (family) {
    case Family::Fbs: return fbs_cov(H(), s, t);
    case Family::DualFbs: return dual_fbs_corr(H(), s.x - t.x, s.y - t.y);
    default:
      throw std::invalid_argument("cov2 called on a one-parameter family");
  }
}

std::string KernelSpec::describe() const {
  std::string out = family_name(family);
  if (hurst) out += " H=" + fmt_double(hurst->value());
  if (family == Family::Sech) out += " scale=" + fmt_double(sech_scale);
  return out;
}

Eigen::MatrixXd gram_matrix(const KernelSpec& kernel, const Grid1D& grid) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      g(i, j) = g(j, i) = kernel.cov1(grid.points[i], grid.points[j]);
    }
  }
  return g;
}

Eigen::MatrixXd gram_matrix(const KernelSpec& kernel, const Grid2D& grid) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      g(i, j) = g(j, i) = kernel.cov2(grid.points[i], grid.points[j]);
    }
  }
  return g;
}

// ---------------------------------------------------------------------------

SweepReport verify_r_nonneg(const Hurst& H, int gridsize) {
  if (gridsize < 2) throw std::invalid_argument("verify_r_nonneg: gridsize >= 2");
  SweepReport rep;
  rep.extremum = std::numeric_limits<double>::infinity();
  for (int i = 0; i < gridsize; ++i) {
    const double x = static_cast<double>(i) / (gridsize - 1);
    const double r = r_poly(H, x);
    if (r < rep.extremum) {
      rep.extremum = r;
      rep.arg = x;
    }
  }
  rep.pass = rep.extremum >= -1e-12;
  rep.detail = "min R = " + fmt_double(rep.extremum) + " at x = " + fmt_double(rep.arg);
  return rep;
}

SweepReport verify_monotone(const Hurst& H, double tmax, int gridsize) {
  if (!(tmax > 0.0)) throw std::invalid_argument("verify_monotone: tmax > 0");
  if (gridsize < 2) throw std::invalid_argument("verify_monotone: gridsize >= 2");
  SweepReport rep;
  rep.extremum = -std::numeric_limits<double>::infinity();
  double prev = dual_ifbm_corr(H, 0.0);
  for (int i = 1; i < gridsize; ++i) {
    const double t = tmax * static_cast<double>(i) / (gridsize - 1);
    const double cur = dual_ifbm_corr(H, t);
    const double diff = cur - prev;
    if (diff > rep.extremum) {
      rep.extremum = diff;
      rep.arg = t;
    }
    prev = cur;
  }
  rep.pass = rep.extremum <= 1e-12;
  rep.detail = "max consecutive increment = " + fmt_double(rep.extremum) +
               " at t = " + fmt_double(rep.arg);
  return rep;
}

CoshBoundReport verify_cosh_bound(const Hurst& H, double tmax, int gridsize) {
  if (!(tmax >= 10.0)) throw std::invalid_argument("verify_cosh_bound: tmax >= 10");
  if (gridsize < 2) throw std::invalid_argument("verify_cosh_bound: gridsize >= 2");
  CoshBoundReport rep;
  const double hh = H.value() * H.bar();
  double rho_star = std::numeric_limits<double>::infinity();
  double t_at_inf = 0.0;
  double last_violation = -1.0;  // of the rho = 1 bound
  double first_t = 0.0;
  for (int i = 1; i <= gridsize; ++i) {
    const double t = tmax * static_cast<double>(i) / gridsize;
    if (i == 1) first_t = t;
    const double b = dual_ifbm_corr(H, t);
    if (b > 1.0 + 1e-12) {
      rep.pass = false;
      rep.detail = "B_H(t) > 1 at t = " + fmt_double(t);
      return rep;
    }
    if (b <= 0.0) continue;  // any rho works there
    const double rho = acosh_clamped(1.0 / b) / (hh * t);
    if (rho < rho_star) {
      rho_star = rho;
      t_at_inf = t;
    }
    if (b > 1.0 / std::cosh(hh * t) + 1e-15) last_violation = t;
  }
  rep.rho_star = rho_star;
  rep.t_at_inf = t_at_inf;
  if (last_violation < 0.0) {
    rep.t_star = first_t;
  } else if (last_violation >= tmax * (gridsize - 0.5) / gridsize) {
    rep.pass = false;
    rep.detail = "rho=1 bound still violated at tmax; T* not reached";
    return rep;
  } else {
    rep.t_star = last_violation + tmax / gridsize;
  }
  rep.pass = rho_star > 0.0;
  rep.detail = "rho* = " + fmt_double(rep.rho_star) +
               " at t = " + fmt_double(rep.t_at_inf) +
               ", T* = " + fmt_double(rep.t_star);
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

// Draws one admissible point of the (a1, a2) chart and its h-perturbation,
// returns the analytic increment variance of the sheet between the two
// mapped points of U0 cap [0,T]^2.
double lemma1_pair_delta2(const Hurst& H, double T, double h, CounterRng& rng) {
  const double a1 = 1e-3 + (1.0 - 1e-3) * rng.next_double();
  const double a2cap = std::min(1.0, a1 * T * T);
  const double a2 = a2cap * rng.next_double();
  double b1 = a1 + h * (2.0 * rng.next_double() - 1.0);
  b1 = std::clamp(b1, 1e-3, 1.0);
  double b2 = a2 + h * (2.0 * rng.next_double() - 1.0);
  b2 = std::clamp(b2, 0.0, std::min(1.0, b1 * T * T));
  const P2 s{a1 * T, a2 / (a1 * T)};
  const P2 sb{b1 * T, (b1 > 0.0) ? b2 / (b1 * T) : 0.0};
  return fbs_cov(H, s, s) + fbs_cov(H, sb, sb) - 2.0 * fbs_cov(H, s, sb);
}

}  // namespace

double lemma1_delta2_hat(const Hurst& H, double T, double h, int n_pairs,
                         std::uint64_t seed) {
  double worst = 0.0;
  CounterRng rng(seed, CounterRng::mix(0x1e44a1u, static_cast<std::uint64_t>(T)));
  for (int i = 0; i < n_pairs; ++i) {
    worst = std::max(worst, lemma1_pair_delta2(H, T, h, rng));
  }
  return worst;
}

double lemma1_fit_cH(const Hurst& H, double T_fit, int n_pairs,
                     std::uint64_t seed) {
  double c = 0.0;
  for (int k = 0; k <= 10; ++k) {
    const double h = std::exp2(-k);
    const double d2 = lemma1_delta2_hat(H, T_fit, h, n_pairs, seed + k);
    const double shape = pow_abs(1.0 + 2.0 / (T_fit * T_fit * h), -H.two());
    c = std::max(c, d2 / shape);
  }
  return 1.25 * c;
}

}  // namespace fbmlab
