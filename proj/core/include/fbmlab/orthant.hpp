#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "fbmlab/domain.hpp"
#include "fbmlab/kernels.hpp"

namespace fbmlab {

// P(X_i < b_i for all i), X centered Gaussian with the given covariance.
// Dimension capped at 25 to keep the oracle quasi-exact.
struct OrthantQuery {
  Eigen::MatrixXd cov;
  Eigen::VectorXd thresholds;

  OrthantQuery(Eigen::MatrixXd c, Eigen::VectorXd b);
  std::size_t dim() const { return static_cast<std::size_t>(cov.rows()); }
};

struct OrthantEstimate {
  double estimate = 0.0;
  // Conservative half-width: 3x the empirical std over the QMC
  // randomizations (0 for the closed-form branches).
  double err = 0.0;
};

// n = 1 by the normal CDF, n = 2 by 1-D quadrature of the conditioned CDF,
// n >= 3 by separation-of-variables randomized QMC (16 shifted Richtmyer
// lattices, n_qmc points in total).
OrthantEstimate orthant_prob(const OrthantQuery& q, std::size_t n_qmc,
                             std::uint64_t seed);

enum class CheckStatus { Pass, Fail, Inapplicable };

struct CheckReport {
  CheckStatus status = CheckStatus::Fail;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  std::string detail;
  bool passed() const { return status == CheckStatus::Pass; }
};

// Slepian comparison: with equal diagonals and covA <= covB entrywise,
// P_A(X < b) <= P_B(X < b). Precondition violations yield Inapplicable.
CheckReport slepian_check(const Eigen::MatrixXd& covA,
                          const Eigen::MatrixXd& covB,
                          const Eigen::VectorXd& thresholds, std::size_t n_qmc,
                          std::uint64_t seed);

// Parquet supermultiplicativity: P(whole) >= prod_i P(cell_i) within
// propagated QMC error. Grid points are assigned to cells by region
// membership; nonnegative cross-covariance is a checked hypothesis.
CheckReport supermult_check(const KernelSpec& kernel, const DomainSpec& domain,
                            const std::vector<DomainSpec>& partition,
                            double threshold, std::size_t n_qmc,
                            std::uint64_t seed);

namespace detail {
// QMC path without the small-n closed-form shortcuts (for calibration).
OrthantEstimate orthant_prob_qmc(const OrthantQuery& q, std::size_t n_qmc,
                                 std::uint64_t seed);
// Closed-form standardized bivariate: P(Z1 < z1, Z2 < z2 | corr r).
double bivariate_cdf(double z1, double z2, double r);
}  // namespace detail

}  // namespace fbmlab
