#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fbmlab/ensemble.hpp"
#include "fbmlab/grid.hpp"
#include "fbmlab/hurst.hpp"
#include "fbmlab/kernels.hpp"

namespace fbmlab {

struct SampleBudget {
  static constexpr std::size_t kCholMaxGrid = 8192;
  static constexpr std::size_t kFgnMaxSteps = std::size_t{1} << 22;
  static constexpr std::size_t kKronMaxLattice = std::size_t{1} << 20;
  static constexpr std::size_t kEnsembleMaxValues = std::size_t{1} << 27;
};

// Cholesky factor with escalating relative jitter (1e-12, x10, at most 4
// escalations); throws FactorizationError when the matrix stays indefinite.
struct CholResult {
  Eigen::MatrixXd L;
  std::vector<std::string> notes;
};
CholResult chol_with_jitter(Eigen::MatrixXd gram);

// One jointly-Gaussian draw per trial, written into a caller buffer.
// sample() is const and thread-safe; the trial index selects the RNG
// substream, so results do not depend on scheduling or thread count.
class TrialSampler {
 public:
  virtual ~TrialSampler() = default;
  virtual std::size_t n_points() const = 0;
  virtual void sample(std::uint64_t seed, std::uint64_t trial,
                      std::span<double> out) const = 0;
  const std::vector<std::string>& notes() const { return notes_; }
  const std::string& generator_id() const { return generator_id_; }

 protected:
  std::vector<std::string> notes_;
  std::string generator_id_;
};

// Dense factorization of the kernel Gram matrix. Grid points with zero
// analytic variance (the S0 set) are excluded from the factorization and
// emitted as exact zeros.
std::unique_ptr<TrialSampler> make_chol_sampler(const KernelSpec& kernel,
                                                const Grid1D& grid);
std::unique_ptr<TrialSampler> make_chol_sampler(const KernelSpec& kernel,
                                                const Grid2D& grid);

// Exact fBm values on the uniform grid {lo + k*(hi-lo)/n, k=1..n} via
// circulant embedding of the increment covariance; b(0) = 0 requires
// lo == 0 or lo == -hi (n even).
std::unique_ptr<TrialSampler> make_fbm_path_sampler(const Hurst& H, double lo,
                                                    double hi, std::size_t n);

// Trapezoid cumulative integral of the fBm path, same grid contract.
std::unique_ptr<TrialSampler> make_ifbm_path_sampler(const Hurst& H, double lo,
                                                     double hi, std::size_t n);

// Sheet values on the grid_x x grid_y lattice via chol(K1) (x) chol(K2);
// `keep` optionally restricts the output to a subset of lattice indices
// (x-major ordering p = i * |grid_y| + j).
std::unique_ptr<TrialSampler> make_kron_sampler(const Hurst& H,
                                                const Grid1D& grid_x,
                                                const Grid1D& grid_y,
                                                std::vector<std::size_t> keep = {});

// ---------------------------------------------------------------------------
// Materialized ensembles
// ---------------------------------------------------------------------------

PathEnsemble chol_sample(const KernelSpec& kernel, const Grid1D& grid,
                         std::size_t n_trials, std::uint64_t seed);
PathEnsemble chol_sample(const KernelSpec& kernel, const Grid2D& grid,
                         std::size_t n_trials, std::uint64_t seed);

// Exact fractional Gaussian noise (increments over consecutive panels of
// width dt); grid holds the right endpoints k*dt.
PathEnsemble fgn_circulant(const Hurst& H, std::size_t n_steps, double dt,
                           std::size_t n_trials, std::uint64_t seed);

// Cumulative sums of an increments ensemble: fBm values with b(0) = 0.
PathEnsemble fbm_from_fgn(const PathEnsemble& fgn);

// Full rectangular lattice of the sheet.
PathEnsemble fbs_sample_kron(const Hurst& H, const Grid1D& grid_x,
                             const Grid1D& grid_y, std::size_t n_trials,
                             std::uint64_t seed);

enum class IfbmMethod { Quadrature, Exact };

// Integrated fBm on {0, T/n, ..., T}; the x(0) column is exactly zero.
PathEnsemble ifbm_paths(const Hurst& H, double T, std::size_t n_steps,
                        std::size_t n_trials, std::uint64_t seed,
                        IfbmMethod method);

// ---------------------------------------------------------------------------
// Covariance validation
// ---------------------------------------------------------------------------

struct CovReport {
  bool pass = false;
  double max_abs_dev = 0.0;
  double worst_z = 0.0;
  std::size_t worst_i = 0, worst_j = 0;
  std::string detail;
};

// Compares the empirical second-moment matrix against the analytic Gram
// matrix; worst entry z-scored with the Gaussian fourth-moment variance
// (C_ii C_jj + C_ij^2) / n. Requires n_trials >= 100.
CovReport empirical_cov_report(const PathEnsemble& ens,
                               double z_threshold = 4.0);

// Minimum and maximum eigenvalue of the circulant embedding used by
// fgn_circulant (diagnostic for the fallback rule).
std::pair<double, double> fgn_embedding_eigs(const Hurst& H,
                                             std::size_t n_steps, double dt);

}  // namespace fbmlab
