#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>

#include "fbmlab/grid.hpp"
#include "fbmlab/hurst.hpp"

namespace fbmlab {

// ---------------------------------------------------------------------------
// Closed-form covariance / correlation functions
// ---------------------------------------------------------------------------

// Fractional Brownian motion: (|a|^2H + |b|^2H - |a-b|^2H) / 2.
double fbm_cov(const Hurst& H, double a, double b);

// Fractional Brownian sheet: product of fbm_cov per coordinate.
double fbs_cov(const Hurst& H, P2 s, P2 t);

// Integrated fBm x(s) = int_0^s b_H: closed form of int_0^s int_0^t fbm_cov,
// valid for any signs of s and t.
double ifbm_cov(const Hurst& H, double s, double t);

// Stationary correlation of the Lamperti dual of integrated fBm,
// B_H(t) = [2(1+H)(e^{Ht}+e^{-Ht}) - (e^{(1+H)t}+e^{-(1+H)t})
//           + (e^{t/2}-e^{-t/2})^{2H+2}] / (2+4H),  t >= 0.
// Evaluated through an algebraically identical cancellation-free form for
// t >= ln 2; the literal form loses all precision past t ~ 12.
double dual_ifbm_corr(const Hurst& H, double t);

// Stationary correlation of the Lamperti dual of fBm:
// cosh(Ht) - (2 sinh(t/2))^{2H} / 2,  t >= 0.
double dual_fbm_corr(const Hurst& H, double t);

// Separable correlation of the dual stationary sheet (any signs).
double dual_fbs_corr(const Hurst& H, double t1, double t2);

// 1 / cosh(scale * t).
double sech_corr(double t, double scale = 0.5);

// R(x) = 1 - 2Hx - (1-x)^{2H}(1-x^2) + 2Hx^{2H+1} - x^{2+2H} on [0,1].
double r_poly(const Hurst& H, double x);

// f(x) = |x|^{2H} + 1 - |x-1|^{2H}.
double f_drift(const Hurst& H, double x);

// psi_a(s) = f(s1/a) * f(s2*a), a > 0.
double psi_drift(const Hurst& H, double a, P2 s);

// B(n) = (2^{-2H|n|} + 1 - |2^{-|n|} - 1|^{2H})^2 * 2^{2H|n|}.
double eta_corr(const Hurst& H, long n);

// Sum over |n|<=N, |m|<=N of eta_corr(n-m).
double phi_norm_sq(const Hurst& H, int N);

// c = sum over all integers n of eta_corr(n), truncated when the geometric
// tail estimate drops below 1e-12.
double eta_corr_total(const Hurst& H);

// c_H * (1 + 2 T^{-2} h^{-1})^{-2H}, T > 1, 0 < h <= 1, c_H > 0.
double lemma1_bound(const Hurst& H, double T, double h, double cH);

// ---------------------------------------------------------------------------
// Kernel descriptor
// ---------------------------------------------------------------------------

enum class Family { Fbm, Fbs, Ifbm, DualFbm, DualIfbm, DualFbs, Sech };

const char* family_name(Family f);
Family family_from_name(const std::string& name);

// Covariance descriptor for one process family. Every family except Sech
// carries a Hurst index; Sech carries only the scale (default 1/2).
struct KernelSpec {
  Family family;
  std::optional<Hurst> hurst;
  double sech_scale = 0.5;

  static KernelSpec fbm(Hurst h) { return {Family::Fbm, h, 0.5}; }
  static KernelSpec fbs(Hurst h) { return {Family::Fbs, h, 0.5}; }
  static KernelSpec ifbm(Hurst h) { return {Family::Ifbm, h, 0.5}; }
  static KernelSpec dual_fbm(Hurst h) { return {Family::DualFbm, h, 0.5}; }
  static KernelSpec dual_ifbm(Hurst h) { return {Family::DualIfbm, h, 0.5}; }
  static KernelSpec dual_fbs(Hurst h) { return {Family::DualFbs, h, 0.5}; }
  static KernelSpec sech(double scale = 0.5);

  bool is_two_param() const {
    return family == Family::Fbs || family == Family::DualFbs;
  }
  bool is_stationary() const {
    return family == Family::DualFbm || family == Family::DualIfbm ||
           family == Family::DualFbs || family == Family::Sech;
  }

  const Hurst& H() const;

  // Covariance between observation times/points of the process.
  double cov1(double a, double b) const;  // 1-parameter families
  double cov2(P2 s, P2 t) const;          // 2-parameter families
  double var1(double a) const { return cov1(a, a); }
  double var2(P2 s) const { return cov2(s, s); }

  std::string describe() const;
};

Eigen::MatrixXd gram_matrix(const KernelSpec& kernel, const Grid1D& grid);
Eigen::MatrixXd gram_matrix(const KernelSpec& kernel, const Grid2D& grid);

// ---------------------------------------------------------------------------
// Numeric verifiers for the analytic inequalities
// ---------------------------------------------------------------------------

struct SweepReport {
  bool pass = false;
  double extremum = 0.0;  // min of r_poly, or max consecutive increment
  double arg = 0.0;       // location of the extremum
  std::string detail;
};

// min over a uniform x-grid of [0,1] of r_poly; passes when >= -1e-12.
SweepReport verify_r_nonneg(const Hurst& H, int gridsize);

// Checks B_H is nonincreasing on a uniform grid of [0, tmax]
// (consecutive differences <= 1e-12).
SweepReport verify_monotone(const Hurst& H, double tmax, int gridsize);

struct CoshBoundReport {
  bool pass = false;
  double rho_star = 0.0;  // inf over the grid of acosh(1/B_H(t)) / (H Hbar t)
  double t_at_inf = 0.0;
  double t_star = 0.0;    // from this t on, B_H(t) <= 1/cosh(H Hbar t)
  std::string detail;
};

// Grid infimum of the admissible rho in B_H(t) <= 1/cosh(rho H Hbar t),
// plus the onset point of the rho = 1 bound; tmax >= 10.
CoshBoundReport verify_cosh_bound(const Hurst& H, double tmax, int gridsize);

// ---------------------------------------------------------------------------
// Empirical fit of the Lemma-1 modulus constant
// ---------------------------------------------------------------------------

// Max over sampled pairs (in the a1 = s1/T, a2 = s1*s2 coordinates of the
// unit-square chart on U0 cap [0,T]^2, pair distance < h per coordinate) of
// the analytic increment variance E|x(s) - x(s~)|^2.
double lemma1_delta2_hat(const Hurst& H, double T, double h, int n_pairs,
                         std::uint64_t seed);

// Fits c_H = max_h delta2_hat(h) / (1 + 2 T^{-2} h^{-1})^{-2H} over a dyadic
// h-grid at T_fit, returned with 25% headroom so the bound stays uniform
// over larger T.
double lemma1_fit_cH(const Hurst& H, double T_fit, int n_pairs,
                     std::uint64_t seed);

namespace detail {
// |x|^p via exp(p ln|x|) with an explicit zero branch.
double pow_abs(double x, double p);
// Literal transcription of the B_H(t) display; catastrophically cancels for
// large t, kept for cross-checking the stable evaluation.
double dual_ifbm_corr_naive(const Hurst& H, double t);
// (1-x)^q - 1 + qx as a power series in x (valid for |x| <= 1/2), divided
// by x^2; positive for x in (0,1).
double taylor_remainder2(double q, double x);
}  // namespace detail

}  // namespace fbmlab
