#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "fbmlab/grid.hpp"
#include "fbmlab/kernels.hpp"

namespace fbmlab {

enum class Content { ProcessValues, Increments };

// A batch of jointly sampled values on a grid, with seed provenance.
// Rows are trials, columns are grid points.
struct PathEnsemble {
  KernelSpec kernel;
  std::variant<Grid1D, Grid2D> grid;
  Eigen::MatrixXd values;
  std::uint64_t seed = 0;
  std::string generator_id;
  Content content = Content::ProcessValues;
  std::vector<std::string> notes;

  std::size_t n_trials() const { return static_cast<std::size_t>(values.rows()); }
  std::size_t n_points() const { return static_cast<std::size_t>(values.cols()); }
  std::size_t grid_size() const;
};

// Binary column-major matrix (values.bin) plus a JSON sidecar
// (ensemble.json) carrying kernel, grid, seed and generator id.
void save_ensemble(const PathEnsemble& ens, const std::filesystem::path& dir);
PathEnsemble load_ensemble(const std::filesystem::path& dir);

// CSV export for small grids: one header row of grid coordinates, one row
// per trial.
void save_ensemble_csv(const PathEnsemble& ens,
                       const std::filesystem::path& file);

}  // namespace fbmlab
