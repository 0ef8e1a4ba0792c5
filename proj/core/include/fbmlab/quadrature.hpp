#pragma once

#include <functional>

#include "fbmlab/hurst.hpp"

namespace fbmlab {

// Recursive adaptive Simpson with Richardson acceleration. Subintervals are
// accepted when |S2 - S1| <= 15 * max(abs_tol, rel_tol * |S2|).
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double rel_tol, double abs_tol = 0.0,
                        int max_depth = 48);

// Independent numerical-integration oracle for the integrated-fBm
// covariance: nested adaptive quadrature of fbm_cov over [0,s] x [0,t]
// with the |u-v| kink split out. Never calls the closed form it checks.
double ifbm_cov_quadrature(const Hurst& H, double s, double t,
                           double rel_tol = 1e-11);

}  // namespace fbmlab
