#pragma once

namespace fbmlab {

// Standard normal CDF, accurate in both tails.
double norm_cdf(double x);

// Standard normal density.
double norm_pdf(double x);

// Inverse standard normal CDF (Wichura's AS 241, double precision).
// Requires 0 < p < 1; p at the boundary returns +/-inf.
double norm_quantile(double p);

// acosh with the argument clamped up to 1 when it undershoots by <= 1e-14
// (correlations can exceed their bound by rounding near t = 0).
double acosh_clamped(double x);

}  // namespace fbmlab
