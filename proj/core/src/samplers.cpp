#include "fbmlab/samplers.hpp"

#include <fftw3.h>

#include <Eigen/Cholesky>
#include <cmath>
#include <complex>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

#include "fbmlab/common.hpp"
#include "fbmlab/parallel.hpp"
#include "fbmlab/rng.hpp"

namespace fbmlab {

namespace {

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftScratch {
  std::vector<std::complex<double>> spec;
  std::vector<double> time;
};

FftScratch& fft_scratch(std::size_t m) {
  thread_local std::unordered_map<std::size_t, FftScratch> cache;
  FftScratch& s = cache[m];
  s.spec.resize(m / 2 + 1);
  s.time.resize(m);
  return s;
}

}  // namespace

CholResult chol_with_jitter(Eigen::MatrixXd gram) {
  CholResult result;
  const Eigen::Index n = gram.rows();
  if (n == 0) {
    result.L.resize(0, 0);
    return result;
  }
  const double max_diag = gram.diagonal().maxCoeff();
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() == Eigen::Success) {
    result.L = llt.matrixL();
    return result;
  }
  double jitter = 1e-12 * max_diag;
  for (int attempt = 0; attempt <= 4; ++attempt) {
    Eigen::MatrixXd jittered = gram;
    jittered.diagonal().array() += jitter;
    llt.compute(jittered);
    result.notes.push_back("cholesky jitter " + fmt_double(jitter) +
                           (llt.info() == Eigen::Success ? " applied" : " failed"));
    if (llt.info() == Eigen::Success) {
      result.L = llt.matrixL();
      return result;
    }
    jitter *= 10.0;
  }
  throw FactorizationError(
      "Gram matrix not positive semidefinite after jitter escalation");
}

// ---------------------------------------------------------------------------
// Cholesky sampler
// ---------------------------------------------------------------------------

namespace {

class CholSampler final : public TrialSampler {
 public:
  CholSampler(const KernelSpec& kernel, Eigen::MatrixXd gram,
              std::vector<double> variances) {
    generator_id_ = "chol_v1";
    const std::size_t n = variances.size();
    reduced_index_.assign(n, SIZE_MAX);
    std::vector<Eigen::Index> live;
    for (std::size_t i = 0; i < n; ++i) {
      if (variances[i] > 0.0) {
        reduced_index_[i] = live.size();
        live.push_back(static_cast<Eigen::Index>(i));
      }
    }
    n_points_ = n;
    n_live_ = live.size();
    if (n_live_ < n) {
      notes_.push_back(std::to_string(n - n_live_) +
                       " zero-variance grid point(s) emitted as exact zeros");
    }
    if (n_live_ == 0) return;
    Eigen::MatrixXd reduced(n_live_, n_live_);
    for (std::size_t i = 0; i < n_live_; ++i) {
      for (std::size_t j = 0; j < n_live_; ++j) {
        reduced(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            gram(live[i], live[j]);
      }
    }
    auto chol = chol_with_jitter(std::move(reduced));
    L_ = std::move(chol.L);
    for (auto& note : chol.notes) notes_.push_back(kernel.describe() + ": " + note);
  }

  std::size_t n_points() const override { return n_points_; }

  void sample(std::uint64_t seed, std::uint64_t trial,
              std::span<double> out) const override {
    CounterRng rng(seed, trial);
    thread_local Eigen::VectorXd z, y;
    z.resize(static_cast<Eigen::Index>(n_live_));
    rng.fill_gaussian(std::span<double>(z.data(), n_live_));
    y.noalias() = L_.triangularView<Eigen::Lower>() * z;
    for (std::size_t i = 0; i < n_points_; ++i) {
      out[i] = (reduced_index_[i] == SIZE_MAX)
                   ? 0.0
                   : y(static_cast<Eigen::Index>(reduced_index_[i]));
    }
  }

 private:
  Eigen::MatrixXd L_;
  std::vector<std::size_t> reduced_index_;
  std::size_t n_points_ = 0;
  std::size_t n_live_ = 0;
};

std::vector<double> grid_variances(const KernelSpec& kernel, const Grid1D& g) {
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = kernel.var1(g.points[i]);
  return v;
}

std::vector<double> grid_variances(const KernelSpec& kernel, const Grid2D& g) {
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = kernel.var2(g.points[i]);
  return v;
}

void check_chol_budget(std::size_t n) {
  if (n > SampleBudget::kCholMaxGrid) {
    throw BudgetError("grid size " + std::to_string(n) +
                      " exceeds dense factorization budget " +
                      std::to_string(SampleBudget::kCholMaxGrid));
  }
}

}  // namespace

std::unique_ptr<TrialSampler> make_chol_sampler(const KernelSpec& kernel,
                                                const Grid1D& grid) {
  check_chol_budget(grid.size());
  return std::make_unique<CholSampler>(kernel, gram_matrix(kernel, grid),
                                       grid_variances(kernel, grid));
}

std::unique_ptr<TrialSampler> make_chol_sampler(const KernelSpec& kernel,
                                                const Grid2D& grid) {
  check_chol_budget(grid.size());
  return std::make_unique<CholSampler>(kernel, gram_matrix(kernel, grid),
                                       grid_variances(kernel, grid));
}

// ---------------------------------------------------------------------------
// Circulant-embedding fBm path sampler
// ---------------------------------------------------------------------------

namespace {

// fGn autocovariance at lag k for panel width dt.
double fgn_autocov(const Hurst& H, long k, double dt) {
  const double twoH = H.two();
  const double scale = detail::pow_abs(dt, twoH);
  if (k == 0) return scale;
  const double kk = static_cast<double>(k);
  return 0.5 * scale *
         (detail::pow_abs(kk + 1.0, twoH) - 2.0 * detail::pow_abs(kk, twoH) +
          detail::pow_abs(kk - 1.0, twoH));
}

class FbmPathSampler final : public TrialSampler {
 public:
  enum class Emit { Path, Increments };

  FbmPathSampler(const Hurst& H, double lo, double hi, std::size_t n, Emit emit)
      : emit_(emit), n_(n) {
    generator_id_ = emit == Emit::Path ? "fbm_circulant_v1" : "fgn_circulant_v1";
    if (n_ == 0) throw std::invalid_argument("fbm path sampler: n must be positive");
    if (n_ > SampleBudget::kFgnMaxSteps) {
      throw BudgetError("n_steps " + std::to_string(n_) +
                        " exceeds circulant budget " +
                        std::to_string(SampleBudget::kFgnMaxSteps));
    }
    if (lo == 0.0) {
      origin_ = 0;
    } else if (lo == -hi && n_ % 2 == 0) {
      origin_ = n_ / 2;
    } else {
      throw std::invalid_argument(
          "fbm path sampler: lo must be 0, or -hi with even n");
    }
    dt_ = (hi - lo) / static_cast<double>(n_);
    m_ = 2 * n_;
    std::vector<double> circ(m_);
    for (std::size_t j = 0; j <= n_; ++j) {
      circ[j] = fgn_autocov(H, static_cast<long>(j), dt_);
    }
    for (std::size_t j = 1; j + 1 <= n_; ++j) circ[m_ - j] = circ[j];

    std::vector<std::complex<double>> spectrum(m_ / 2 + 1);
    {
      std::lock_guard<std::mutex> lock(fftw_planner_mutex());
      fftw_plan plan = fftw_plan_dft_r2c_1d(
          static_cast<int>(m_), circ.data(),
          reinterpret_cast<fftw_complex*>(spectrum.data()), FFTW_ESTIMATE);
      fftw_execute(plan);
      fftw_destroy_plan(plan);
    }
    double lam_min = spectrum[0].real();
    double lam_max = lam_min;
    for (const auto& s : spectrum) {
      lam_min = std::min(lam_min, s.real());
      lam_max = std::max(lam_max, s.real());
    }
    lam_min_ = lam_min;
    lam_max_ = lam_max;
    if (lam_min < -1e-10 * std::max(lam_max, 1e-300)) {
      // spec'd escape hatch; the fGn embedding is nonnegative in practice
      notes_.push_back("circulant embedding indefinite (min eig " +
                       fmt_double(lam_min) + "); falling back to chol_sample");
      build_fallback(H, lo, hi);
      return;
    }
    amp_.resize(m_ / 2 + 1);
    for (std::size_t k = 0; k < amp_.size(); ++k) {
      amp_[k] = std::sqrt(std::max(spectrum[k].real(), 0.0) /
                          static_cast<double>(m_));
    }
    {
      std::lock_guard<std::mutex> lock(fftw_planner_mutex());
      FftScratch& s = fft_scratch(m_);
      plan_ = fftw_plan_dft_c2r_1d(
          static_cast<int>(m_), reinterpret_cast<fftw_complex*>(s.spec.data()),
          s.time.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
  }

  ~FbmPathSampler() override {
    if (plan_) {
      std::lock_guard<std::mutex> lock(fftw_planner_mutex());
      fftw_destroy_plan(plan_);
    }
  }

  FbmPathSampler(const FbmPathSampler&) = delete;
  FbmPathSampler& operator=(const FbmPathSampler&) = delete;

  std::size_t n_points() const override { return n_; }
  double dt() const { return dt_; }
  std::size_t origin() const { return origin_; }
  std::pair<double, double> embedding_eigs() const { return {lam_min_, lam_max_}; }

  void sample(std::uint64_t seed, std::uint64_t trial,
              std::span<double> out) const override {
    if (fallback_) {
      sample_fallback(seed, trial, out);
      return;
    }
    FftScratch& s = fft_scratch(m_);
    CounterRng rng(seed, trial);
    constexpr double inv_sqrt2 = 0.7071067811865475244;
    s.spec[0] = {amp_[0] * rng.next_gaussian(), 0.0};
    for (std::size_t k = 1; k < m_ / 2; ++k) {
      const double a = rng.next_gaussian();
      const double b = rng.next_gaussian();
      s.spec[k] = {amp_[k] * a * inv_sqrt2, amp_[k] * b * inv_sqrt2};
    }
    s.spec[m_ / 2] = {amp_[m_ / 2] * rng.next_gaussian(), 0.0};
    fftw_execute_dft_c2r(plan_, reinterpret_cast<fftw_complex*>(s.spec.data()),
                         s.time.data());
    if (emit_ == Emit::Increments) {
      for (std::size_t k = 0; k < n_; ++k) out[k] = s.time[k];
      return;
    }
    double acc = 0.0;
    for (std::size_t k = 1; k <= n_; ++k) {
      acc += s.time[k - 1];
      out[k - 1] = acc;
    }
    if (origin_ > 0) {
      const double pin = out[origin_ - 1];
      for (std::size_t k = 0; k < n_; ++k) out[k] -= pin;
    }
  }

 private:
  void build_fallback(const Hurst& H, double lo, double hi) {
    fallback_ = true;
    if (n_ + 1 > SampleBudget::kCholMaxGrid) {
      throw FactorizationError(
          "circulant embedding indefinite and grid too large for the dense "
          "fallback");
    }
    std::vector<double> pts;
    pts.reserve(n_ + 1);
    for (std::size_t k = 0; k <= n_; ++k) {
      pts.push_back(lo + dt_ * static_cast<double>(k));
    }
    if (origin_ > 0) pts[origin_] = 0.0;  // exact zero lattice point
    fallback_grid_ = std::make_unique<Grid1D>(std::move(pts));
    fallback_sampler_ = make_chol_sampler(
        KernelSpec::fbm(H), *fallback_grid_);
  }

  void sample_fallback(std::uint64_t seed, std::uint64_t trial,
                       std::span<double> out) const {
    thread_local std::vector<double> buf;
    buf.resize(n_ + 1);
    fallback_sampler_->sample(seed, trial, buf);
    if (emit_ == Emit::Path) {
      for (std::size_t k = 1; k <= n_; ++k) out[k - 1] = buf[k];
    } else {
      for (std::size_t k = 1; k <= n_; ++k) out[k - 1] = buf[k] - buf[k - 1];
    }
  }

  Emit emit_;
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::size_t origin_ = 0;
  double dt_ = 0.0;
  double lam_min_ = 0.0, lam_max_ = 0.0;
  std::vector<double> amp_;
  fftw_plan plan_ = nullptr;
  bool fallback_ = false;
  std::unique_ptr<Grid1D> fallback_grid_;
  std::unique_ptr<TrialSampler> fallback_sampler_;
};

class IfbmPathSampler final : public TrialSampler {
 public:
  IfbmPathSampler(const Hurst& H, double lo, double hi, std::size_t n)
      : fbm_(H, lo, hi, n, FbmPathSampler::Emit::Path) {
    generator_id_ = "ifbm_quadrature_v1";
    notes_ = fbm_.notes();
  }

  std::size_t n_points() const override { return fbm_.n_points(); }

  void sample(std::uint64_t seed, std::uint64_t trial,
              std::span<double> out) const override {
    const std::size_t n = fbm_.n_points();
    thread_local std::vector<double> b;
    b.resize(n);
    fbm_.sample(seed, trial, b);
    const double dt = fbm_.dt();
    const std::size_t k0 = fbm_.origin();
    // trapezoid integral anchored at x(0) = 0; b[k0-1] is the exact-zero
    // lattice value when the origin is interior
    double acc = 0.0;
    double prev_b = 0.0;
    for (std::size_t k = k0 + 1; k <= n; ++k) {
      acc += 0.5 * dt * (prev_b + b[k - 1]);
      out[k - 1] = acc;
      prev_b = b[k - 1];
    }
    if (k0 > 0) {
      acc = 0.0;
      prev_b = 0.0;  // b at the origin lattice point
      for (std::size_t k = k0; k >= 1; --k) {
        acc -= 0.5 * dt * (prev_b + b[k - 1]);
        out[k - 1] = acc;
        prev_b = b[k - 1];
      }
    }
  }

 private:
  FbmPathSampler fbm_;
};

}  // namespace

std::unique_ptr<TrialSampler> make_fbm_path_sampler(const Hurst& H, double lo,
                                                    double hi, std::size_t n) {
  return std::make_unique<FbmPathSampler>(H, lo, hi, n,
                                          FbmPathSampler::Emit::Path);
}

std::unique_ptr<TrialSampler> make_ifbm_path_sampler(const Hurst& H, double lo,
                                                     double hi, std::size_t n) {
  return std::make_unique<IfbmPathSampler>(H, lo, hi, n);
}

// ---------------------------------------------------------------------------
// Kronecker sheet sampler
// ---------------------------------------------------------------------------

namespace {

class KronSampler final : public TrialSampler {
 public:
  KronSampler(const Hurst& H, const Grid1D& gx, const Grid1D& gy,
              std::vector<std::size_t> keep)
      : keep_(std::move(keep)) {
    generator_id_ = "fbs_kron_v1";
    nx_ = gx.size();
    ny_ = gy.size();
    if (nx_ * ny_ > SampleBudget::kKronMaxLattice) {
      throw BudgetError("lattice size exceeds Kronecker budget");
    }
    const KernelSpec k1 = KernelSpec::fbm(H);
    setup_factor(k1, gx, L1_, red_x_);
    setup_factor(k1, gy, L2_, red_y_);
    if (keep_.empty()) {
      keep_.resize(nx_ * ny_);
      for (std::size_t p = 0; p < keep_.size(); ++p) keep_[p] = p;
    } else {
      for (std::size_t p : keep_) {
        if (p >= nx_ * ny_) {
          throw std::invalid_argument("kron sampler: keep index out of range");
        }
      }
    }
  }

  std::size_t n_points() const override { return keep_.size(); }

  void sample(std::uint64_t seed, std::uint64_t trial,
              std::span<double> out) const override {
    const auto rx = static_cast<Eigen::Index>(L1_.rows());
    const auto ry = static_cast<Eigen::Index>(L2_.rows());
    CounterRng rng(seed, trial);
    thread_local Eigen::MatrixXd z, x;
    z.resize(rx, ry);
    rng.fill_gaussian(std::span<double>(z.data(), static_cast<std::size_t>(rx * ry)));
    // chol(K1 (x) K2) = chol(K1) (x) chol(K2): X = L1 Z L2^T
    x.noalias() = L1_.triangularView<Eigen::Lower>() * z;
    x = x * L2_.triangularView<Eigen::Lower>().transpose();
    for (std::size_t q = 0; q < keep_.size(); ++q) {
      const std::size_t p = keep_[q];
      const std::size_t i = p / ny_;
      const std::size_t j = p % ny_;
      const std::size_t ri = red_x_[i];
      const std::size_t rj = red_y_[j];
      out[q] = (ri == SIZE_MAX || rj == SIZE_MAX)
                   ? 0.0
                   : x(static_cast<Eigen::Index>(ri), static_cast<Eigen::Index>(rj));
    }
  }

 private:
  void setup_factor(const KernelSpec& kernel, const Grid1D& g,
                    Eigen::MatrixXd& L, std::vector<std::size_t>& red) {
    red.assign(g.size(), SIZE_MAX);
    std::vector<double> live;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (kernel.var1(g.points[i]) > 0.0) {
        red[i] = live.size();
        live.push_back(g.points[i]);
      }
    }
    if (live.empty()) {
      L.resize(0, 0);
      notes_.push_back("kron factor entirely on the zero-variance axis");
      return;
    }
    auto chol = chol_with_jitter(gram_matrix(kernel, Grid1D(live)));
    L = std::move(chol.L);
    for (auto& n : chol.notes) notes_.push_back("kron factor: " + n);
    if (live.size() < g.size()) {
      notes_.push_back("kron factor: zero-variance axis point(s) emitted as zeros");
    }
  }

  std::size_t nx_ = 0, ny_ = 0;
  Eigen::MatrixXd L1_, L2_;
  std::vector<std::size_t> red_x_, red_y_;
  std::vector<std::size_t> keep_;
};

}  // namespace

std::unique_ptr<TrialSampler> make_kron_sampler(const Hurst& H,
                                                const Grid1D& grid_x,
                                                const Grid1D& grid_y,
                                                std::vector<std::size_t> keep) {
  return std::make_unique<KronSampler>(H, grid_x, grid_y, std::move(keep));
}

// ---------------------------------------------------------------------------
// Materialized ensembles
// ---------------------------------------------------------------------------

namespace {

void check_ensemble_budget(std::size_t n_trials, std::size_t n_points) {
  if (n_trials == 0) throw std::invalid_argument("n_trials must be >= 1");
  if (n_trials * n_points > SampleBudget::kEnsembleMaxValues) {
    throw BudgetError("ensemble of " + std::to_string(n_trials) + " x " +
                      std::to_string(n_points) +
                      " values exceeds the materialization budget");
  }
}

Eigen::MatrixXd materialize(const TrialSampler& sampler, std::size_t n_trials,
                            std::uint64_t seed) {
  Eigen::MatrixXd values(static_cast<Eigen::Index>(n_trials),
                         static_cast<Eigen::Index>(sampler.n_points()));
  const std::size_t p = sampler.n_points();
  parallel_for(n_trials, [&](std::size_t t) {
    thread_local std::vector<double> buf;
    buf.resize(p);
    sampler.sample(seed, t, buf);
    for (std::size_t j = 0; j < p; ++j) {
      values(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) = buf[j];
    }
  });
  return values;
}

}  // namespace

PathEnsemble chol_sample(const KernelSpec& kernel, const Grid1D& grid,
                         std::size_t n_trials, std::uint64_t seed) {
  check_ensemble_budget(n_trials, grid.size());
  auto sampler = make_chol_sampler(kernel, grid);
  PathEnsemble ens{kernel, grid, materialize(*sampler, n_trials, seed), seed,
                   sampler->generator_id(), Content::ProcessValues,
                   sampler->notes()};
  return ens;
}

PathEnsemble chol_sample(const KernelSpec& kernel, const Grid2D& grid,
                         std::size_t n_trials, std::uint64_t seed) {
  check_ensemble_budget(n_trials, grid.size());
  auto sampler = make_chol_sampler(kernel, grid);
  PathEnsemble ens{kernel, grid, materialize(*sampler, n_trials, seed), seed,
                   sampler->generator_id(), Content::ProcessValues,
                   sampler->notes()};
  return ens;
}

PathEnsemble fgn_circulant(const Hurst& H, std::size_t n_steps, double dt,
                           std::size_t n_trials, std::uint64_t seed) {
  if (!(dt > 0.0)) throw std::invalid_argument("fgn_circulant requires dt > 0");
  check_ensemble_budget(n_trials, n_steps);
  FbmPathSampler sampler(H, 0.0, dt * static_cast<double>(n_steps), n_steps,
                         FbmPathSampler::Emit::Increments);
  PathEnsemble ens{KernelSpec::fbm(H),
                   Grid1D::uniform(0.0, dt * static_cast<double>(n_steps), n_steps),
                   materialize(sampler, n_trials, seed),
                   seed,
                   sampler.generator_id(),
                   Content::Increments,
                   sampler.notes()};
  return ens;
}

PathEnsemble fbm_from_fgn(const PathEnsemble& fgn) {
  if (fgn.content != Content::Increments) {
    throw std::invalid_argument("fbm_from_fgn expects an increments ensemble");
  }
  PathEnsemble out = fgn;
  out.content = Content::ProcessValues;
  out.generator_id = "fbm_circulant_v1";
  for (Eigen::Index j = 1; j < out.values.cols(); ++j) {
    out.values.col(j) += out.values.col(j - 1);
  }
  return out;
}

PathEnsemble fbs_sample_kron(const Hurst& H, const Grid1D& grid_x,
                             const Grid1D& grid_y, std::size_t n_trials,
                             std::uint64_t seed) {
  check_ensemble_budget(n_trials, grid_x.size() * grid_y.size());
  auto sampler = make_kron_sampler(H, grid_x, grid_y);
  std::vector<P2> pts;
  pts.reserve(grid_x.size() * grid_y.size());
  for (double x : grid_x.points) {
    for (double y : grid_y.points) pts.push_back({x, y});
  }
  const double step =
      grid_x.size() > 1 ? grid_x.points[1] - grid_x.points[0] : 1.0;
  PathEnsemble ens{KernelSpec::fbs(H), Grid2D(step, std::move(pts)),
                   materialize(*sampler, n_trials, seed), seed,
                   sampler->generator_id(), Content::ProcessValues,
                   sampler->notes()};
  return ens;
}

PathEnsemble ifbm_paths(const Hurst& H, double T, std::size_t n_steps,
                        std::size_t n_trials, std::uint64_t seed,
                        IfbmMethod method) {
  if (n_steps < 16) throw std::invalid_argument("ifbm_paths requires n_steps >= 16");
  if (!(T > 0.0)) throw std::invalid_argument("ifbm_paths requires T > 0");
  check_ensemble_budget(n_trials, n_steps + 1);
  std::vector<double> pts;
  pts.reserve(n_steps + 1);
  for (std::size_t k = 0; k <= n_steps; ++k) {
    pts.push_back(T * static_cast<double>(k) / static_cast<double>(n_steps));
  }
  Grid1D grid(std::move(pts));
  if (method == IfbmMethod::Exact) {
    auto ens = chol_sample(KernelSpec::ifbm(H), grid, n_trials, seed);
    ens.generator_id = "ifbm_exact_v1";
    return ens;
  }
  auto sampler = make_ifbm_path_sampler(H, 0.0, T, n_steps);
  Eigen::MatrixXd inner = materialize(*sampler, n_trials, seed);
  Eigen::MatrixXd values(inner.rows(), inner.cols() + 1);
  values.col(0).setZero();
  values.rightCols(inner.cols()) = inner;
  PathEnsemble ens{KernelSpec::ifbm(H), std::move(grid), std::move(values),
                   seed, sampler->generator_id(), Content::ProcessValues,
                   sampler->notes()};
  return ens;
}

// ---------------------------------------------------------------------------
// Covariance validation
// ---------------------------------------------------------------------------

namespace {

Eigen::MatrixXd analytic_gram(const PathEnsemble& ens) {
  if (ens.content == Content::ProcessValues) {
    return std::visit(
        [&](const auto& g) { return gram_matrix(ens.kernel, g); }, ens.grid);
  }
  // increments over consecutive panels of the 1-D grid
  const auto& g = std::get<Grid1D>(ens.grid);
  const Hurst& H = ens.kernel.H();
  const std::size_t n = g.size();
  const double dt = n > 1 ? g.points[1] - g.points[0] : g.points[0];
  Eigen::MatrixXd gram(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const double ti = g.points[i];
    for (std::size_t j = 0; j <= i; ++j) {
      const double tj = g.points[j];
      const double c = fbm_cov(H, ti, tj) - fbm_cov(H, ti, tj - dt) -
                       fbm_cov(H, ti - dt, tj) + fbm_cov(H, ti - dt, tj - dt);
      gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = c;
      gram(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = c;
    }
  }
  return gram;
}

}  // namespace

CovReport empirical_cov_report(const PathEnsemble& ens, double z_threshold) {
  if (ens.n_trials() < 100) {
    throw std::invalid_argument("empirical_cov_report requires n_trials >= 100");
  }
  const Eigen::MatrixXd analytic = analytic_gram(ens);
  const double n = static_cast<double>(ens.n_trials());
  const Eigen::MatrixXd emp = ens.values.transpose() * ens.values / n;
  CovReport rep;
  rep.pass = true;
  for (Eigen::Index i = 0; i < analytic.rows(); ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double dev = emp(i, j) - analytic(i, j);
      rep.max_abs_dev = std::max(rep.max_abs_dev, std::fabs(dev));
      const double var_z = (analytic(i, i) * analytic(j, j) +
                            analytic(i, j) * analytic(i, j)) / n;
      double z;
      if (var_z > 0.0) {
        z = std::fabs(dev) / std::sqrt(var_z);
      } else {
        // deterministic entries must be matched exactly up to jitter noise
        z = (std::fabs(emp(i, j)) < 1e-10) ? 0.0
            : std::numeric_limits<double>::infinity();
      }
      if (z > rep.worst_z) {
        rep.worst_z = z;
        rep.worst_i = static_cast<std::size_t>(i);
        rep.worst_j = static_cast<std::size_t>(j);
      }
    }
  }
  rep.pass = rep.worst_z <= z_threshold;
  rep.detail = "worst |z| = " + fmt_double(rep.worst_z) + " at (" +
               std::to_string(rep.worst_i) + "," + std::to_string(rep.worst_j) +
               "), max |dev| = " + fmt_double(rep.max_abs_dev);
  return rep;
}

std::pair<double, double> fgn_embedding_eigs(const Hurst& H,
                                             std::size_t n_steps, double dt) {
  FbmPathSampler sampler(H, 0.0, dt * static_cast<double>(n_steps), n_steps,
                         FbmPathSampler::Emit::Increments);
  return sampler.embedding_eigs();
}

}  // namespace fbmlab
