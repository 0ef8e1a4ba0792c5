#include "fbmlab/orthant.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "fbmlab/common.hpp"
#include "fbmlab/normal.hpp"
#include "fbmlab/parallel.hpp"
#include "fbmlab/quadrature.hpp"
#include "fbmlab/rng.hpp"
#include "fbmlab/samplers.hpp"

namespace fbmlab {

OrthantQuery::OrthantQuery(Eigen::MatrixXd c, Eigen::VectorXd b)
    : cov(std::move(c)), thresholds(std::move(b)) {
  const Eigen::Index n = cov.rows();
  if (n == 0 || cov.cols() != n) {
    throw std::invalid_argument("OrthantQuery: covariance must be square");
  }
  if (n > 25) {
    throw BudgetError("OrthantQuery: dimension " + std::to_string(n) +
                      " exceeds the n <= 25 oracle cap");
  }
  if (thresholds.size() != n) {
    throw std::invalid_argument("OrthantQuery: thresholds size mismatch");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(cov(i, i) > 0.0)) {
      throw std::invalid_argument("OrthantQuery: diagonal must be positive");
    }
    for (Eigen::Index j = 0; j < i; ++j) {
      if (std::fabs(cov(i, j) - cov(j, i)) > 1e-12) {
        throw std::invalid_argument("OrthantQuery: covariance not symmetric");
      }
    }
  }
}

namespace detail {

double bivariate_cdf(double z1, double z2, double r) {
  if (r >= 1.0) return norm_cdf(std::min(z1, z2));
  if (r <= -1.0) return std::max(0.0, norm_cdf(z1) + norm_cdf(z2) - 1.0);
  if (r == 0.0) return norm_cdf(z1) * norm_cdf(z2);
  const double s = std::sqrt(1.0 - r * r);
  const double p1 = norm_cdf(z1);
  if (p1 <= 0.0) return 0.0;
  const auto f = [&](double t) {
    const double y = norm_quantile(std::clamp(t, 1e-300, 1.0 - 1e-16));
    return norm_cdf((z2 - r * y) / s);
  };
  return adaptive_simpson(f, 0.0, p1, 1e-12, 1e-15);
}

namespace {

constexpr int kPrimes[24] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37,
                             41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89};

// One Genz separation-of-variables sweep along a shifted Richtmyer lattice.
double sov_mean(const Eigen::MatrixXd& L, const Eigen::VectorXd& b,
                std::size_t n_points, CounterRng& rng) {
  const Eigen::Index n = L.rows();
  std::vector<double> shift(static_cast<std::size_t>(n) - 1);
  std::vector<double> alpha(shift.size());
  for (std::size_t i = 0; i < shift.size(); ++i) {
    shift[i] = rng.next_double();
    alpha[i] = std::sqrt(static_cast<double>(kPrimes[i]));
  }
  const double tiny_diag = 1e-14 * std::sqrt(L.diagonal().maxCoeff());
  Eigen::VectorXd y(n);
  double acc = 0.0;
  for (std::size_t j = 1; j <= n_points; ++j) {
    double f = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double q = 0.0;
      for (Eigen::Index k = 0; k < i; ++k) q += L(i, k) * y(k);
      double e;
      if (L(i, i) > tiny_diag) {
        e = norm_cdf((b(i) - q) / L(i, i));
      } else {
        e = (b(i) - q >= 0.0) ? 1.0 : 0.0;
      }
      f *= e;
      if (i + 1 < n) {
        double w = static_cast<double>(j) * alpha[static_cast<std::size_t>(i)] +
                   shift[static_cast<std::size_t>(i)];
        w -= std::floor(w);
        const double u = std::clamp(w * e, 1e-16, 1.0 - 1e-16);
        y(i) = (e > 0.0) ? norm_quantile(u) : -38.0;
      }
    }
    acc += f;
  }
  return acc / static_cast<double>(n_points);
}

}  // namespace

OrthantEstimate orthant_prob_qmc(const OrthantQuery& q, std::size_t n_qmc,
                                 std::uint64_t seed) {
  const Eigen::Index n = q.cov.rows();
  // order variables most-binding first (smallest standardized threshold)
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return q.thresholds(a) / std::sqrt(q.cov(a, a)) <
           q.thresholds(b) / std::sqrt(q.cov(b, b));
  });
  Eigen::MatrixXd cov(n, n);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    b(i) = q.thresholds(order[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < n; ++j) {
      cov(i, j) = q.cov(order[static_cast<std::size_t>(i)],
                        order[static_cast<std::size_t>(j)]);
    }
  }
  const Eigen::MatrixXd L = chol_with_jitter(std::move(cov)).L;

  constexpr std::size_t kShifts = 16;
  const std::size_t per_shift = std::max<std::size_t>(n_qmc / kShifts, 64);
  std::array<double, kShifts> means{};
  parallel_for(kShifts, [&](std::size_t k) {
    CounterRng rng(seed, CounterRng::mix(0x0a7a9cull, k));
    means[k] = sov_mean(L, b, per_shift, rng);
  });
  double mean = 0.0;
  for (double m : means) mean += m;
  mean /= kShifts;
  double var = 0.0;
  for (double m : means) var += (m - mean) * (m - mean);
  var /= (kShifts - 1);
  const double sd_mean = std::sqrt(var / kShifts);
  return {std::clamp(mean, 0.0, 1.0), 3.0 * sd_mean};
}

}  // namespace detail

OrthantEstimate orthant_prob(const OrthantQuery& q, std::size_t n_qmc,
                             std::uint64_t seed) {
  const Eigen::Index n = q.cov.rows();
  if (n == 1) {
    return {norm_cdf(q.thresholds(0) / std::sqrt(q.cov(0, 0))), 0.0};
  }
  if (n == 2) {
    const double s1 = std::sqrt(q.cov(0, 0));
    const double s2 = std::sqrt(q.cov(1, 1));
    const double r = std::clamp(q.cov(0, 1) / (s1 * s2), -1.0, 1.0);
    return {detail::bivariate_cdf(q.thresholds(0) / s1, q.thresholds(1) / s2, r),
            1e-10};
  }
  return detail::orthant_prob_qmc(q, n_qmc, seed);
}

CheckReport slepian_check(const Eigen::MatrixXd& covA,
                          const Eigen::MatrixXd& covB,
                          const Eigen::VectorXd& thresholds, std::size_t n_qmc,
                          std::uint64_t seed) {
  CheckReport rep;
  if (covA.rows() != covB.rows() || covA.cols() != covB.cols()) {
    rep.status = CheckStatus::Inapplicable;
    rep.detail = "covariance dimensions differ";
    return rep;
  }
  for (Eigen::Index i = 0; i < covA.rows(); ++i) {
    if (std::fabs(covA(i, i) - covB(i, i)) > 1e-12) {
      rep.status = CheckStatus::Inapplicable;
      rep.detail = "diagonals differ at index " + std::to_string(i) +
                   "; Slepian comparison inapplicable";
      return rep;
    }
    for (Eigen::Index j = 0; j < i; ++j) {
      if (covA(i, j) > covB(i, j) + 1e-12) {
        rep.status = CheckStatus::Inapplicable;
        rep.detail = "covA exceeds covB at (" + std::to_string(i) + "," +
                     std::to_string(j) + "); Slepian comparison inapplicable";
        return rep;
      }
    }
  }
  const auto pa = orthant_prob(OrthantQuery(covA, thresholds), n_qmc, seed);
  const auto pb = orthant_prob(OrthantQuery(covB, thresholds), n_qmc, seed + 1);
  rep.lhs = pa.estimate;
  rep.rhs = pb.estimate;
  rep.margin = 3.0 * (pa.err + pb.err);
  rep.status = (pa.estimate <= pb.estimate + rep.margin) ? CheckStatus::Pass
                                                         : CheckStatus::Fail;
  rep.detail = "P_A = " + fmt_double(pa.estimate) + " +- " + fmt_double(pa.err) +
               ", P_B = " + fmt_double(pb.estimate) + " +- " + fmt_double(pb.err);
  return rep;
}

CheckReport supermult_check(const KernelSpec& kernel, const DomainSpec& domain,
                            const std::vector<DomainSpec>& partition,
                            double threshold, std::size_t n_qmc,
                            std::uint64_t seed) {
  CheckReport rep;
  if (partition.empty()) {
    rep.status = CheckStatus::Inapplicable;
    rep.detail = "empty partition";
    return rep;
  }
  Eigen::MatrixXd gram;
  std::vector<std::vector<Eigen::Index>> cell_members(partition.size());
  std::size_t n = 0;
  if (domain.is_1d()) {
    const Grid1D grid = domain.grid1();
    n = grid.size();
    gram = gram_matrix(kernel, grid);
    for (std::size_t p = 0; p < n; ++p) {
      int owner = -1;
      for (std::size_t c = 0; c < partition.size(); ++c) {
        if (partition[c].contains1(grid.points[p])) {
          if (owner >= 0) {
            rep.status = CheckStatus::Inapplicable;
            rep.detail = "partition cells overlap";
            return rep;
          }
          owner = static_cast<int>(c);
        }
      }
      if (owner < 0) {
        rep.status = CheckStatus::Inapplicable;
        rep.detail = "grid point not covered by the partition";
        return rep;
      }
      cell_members[static_cast<std::size_t>(owner)].push_back(
          static_cast<Eigen::Index>(p));
    }
  } else {
    const Grid2D grid = domain.grid2();
    n = grid.size();
    gram = gram_matrix(kernel, grid);
    for (std::size_t p = 0; p < n; ++p) {
      int owner = -1;
      for (std::size_t c = 0; c < partition.size(); ++c) {
        if (partition[c].contains2(grid.points[p])) {
          if (owner >= 0) {
            rep.status = CheckStatus::Inapplicable;
            rep.detail = "partition cells overlap";
            return rep;
          }
          owner = static_cast<int>(c);
        }
      }
      if (owner < 0) {
        rep.status = CheckStatus::Inapplicable;
        rep.detail = "grid point not covered by the partition";
        return rep;
      }
      cell_members[static_cast<std::size_t>(owner)].push_back(
          static_cast<Eigen::Index>(p));
    }
  }
  if (n > 25) {
    throw BudgetError("supermult_check: grid exceeds the n <= 25 oracle cap");
  }
  double min_cov = gram.minCoeff();
  if (min_cov < -1e-12) {
    rep.status = CheckStatus::Inapplicable;
    rep.detail = "positivity hypothesis violated: min covariance entry " +
                 fmt_double(min_cov);
    return rep;
  }
  const Eigen::VectorXd b = Eigen::VectorXd::Constant(
      static_cast<Eigen::Index>(n), threshold);
  const auto whole =
      orthant_prob(OrthantQuery(gram, b), n_qmc, seed);
  double product = 1.0;
  std::vector<OrthantEstimate> cells;
  for (std::size_t c = 0; c < partition.size(); ++c) {
    const auto& members = cell_members[c];
    if (members.empty()) {
      rep.status = CheckStatus::Inapplicable;
      rep.detail = "partition cell " + std::to_string(c) + " holds no grid point";
      return rep;
    }
    Eigen::MatrixXd sub(members.size(), members.size());
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = 0; j < members.size(); ++j) {
        sub(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            gram(members[i], members[j]);
      }
    }
    const Eigen::VectorXd bc = Eigen::VectorXd::Constant(
        static_cast<Eigen::Index>(members.size()), threshold);
    const auto est = orthant_prob(OrthantQuery(std::move(sub), bc), n_qmc,
                                  seed + 101 + c);
    cells.push_back(est);
    product *= est.estimate;
  }
  // propagated first-order error of the product plus the whole's own error
  double prod_err = 0.0;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    double partial = 1.0;
    for (std::size_t d = 0; d < cells.size(); ++d) {
      if (d != c) partial *= cells[d].estimate;
    }
    prod_err += partial * cells[c].err;
  }
  rep.lhs = whole.estimate;
  rep.rhs = product;
  rep.margin = 3.0 * (whole.err + prod_err);
  rep.status = (whole.estimate >= product - rep.margin) ? CheckStatus::Pass
                                                        : CheckStatus::Fail;
  rep.detail = "P(whole) = " + fmt_double(whole.estimate) +
               ", prod P(cells) = " + fmt_double(product) +
               ", margin = " + fmt_double(rep.margin) +
               ", min cov entry = " + fmt_double(min_cov);
  return rep;
}

}  // namespace fbmlab
