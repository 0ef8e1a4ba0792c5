#include "fbmlab/ensemble.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "fbmlab/common.hpp"

namespace fbmlab {

using nlohmann::json;

std::size_t PathEnsemble::grid_size() const {
  return std::visit([](const auto& g) { return g.size(); }, grid);
}

namespace {

json kernel_to_json(const KernelSpec& k) {
  json j;
  j["family"] = family_name(k.family);
  if (k.hurst) j["H"] = k.hurst->value();
  if (k.family == Family::Sech) j["scale"] = k.sech_scale;
  return j;
}

KernelSpec kernel_from_json(const json& j) {
  const Family fam = family_from_name(j.at("family").get<std::string>());
  if (fam == Family::Sech) {
    return KernelSpec::sech(j.value("scale", 0.5));
  }
  return KernelSpec{fam, Hurst(j.at("H").get<double>()), 0.5};
}

json grid_to_json(const std::variant<Grid1D, Grid2D>& grid) {
  json j;
  if (std::holds_alternative<Grid1D>(grid)) {
    j["kind"] = "1d";
    j["points"] = std::get<Grid1D>(grid).points;
  } else {
    const auto& g = std::get<Grid2D>(grid);
    j["kind"] = "2d";
    j["lattice_step"] = g.lattice_step;
    json pts = json::array();
    for (const auto& p : g.points) pts.push_back({p.x, p.y});
    j["points"] = std::move(pts);
  }
  return j;
}

std::variant<Grid1D, Grid2D> grid_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "1d") {
    return Grid1D(j.at("points").get<std::vector<double>>());
  }
  if (kind == "2d") {
    std::vector<P2> pts;
    for (const auto& p : j.at("points")) {
      pts.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    }
    return Grid2D(j.at("lattice_step").get<double>(), std::move(pts));
  }
  throw std::invalid_argument("unknown grid kind: " + kind);
}

}  // namespace

void save_ensemble(const PathEnsemble& ens, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream bin(dir / "values.bin", std::ios::binary);
    if (!bin) throw std::runtime_error("cannot open values.bin for writing");
    // Eigen stores column-major; dump the buffer as-is.
    bin.write(reinterpret_cast<const char*>(ens.values.data()),
              static_cast<std::streamsize>(sizeof(double) * ens.values.size()));
  }
  json j;
  j["format_version"] = 1;
  j["kernel"] = kernel_to_json(ens.kernel);
  j["grid"] = grid_to_json(ens.grid);
  j["n_trials"] = ens.n_trials();
  j["n_points"] = ens.n_points();
  j["seed"] = ens.seed;
  j["generator_id"] = ens.generator_id;
  j["content"] = ens.content == Content::ProcessValues ? "process_values"
                                                       : "increments";
  j["layout"] = "column_major";
  j["dtype"] = "float64";
  j["notes"] = ens.notes;
  std::ofstream side(dir / "ensemble.json");
  if (!side) throw std::runtime_error("cannot open ensemble.json for writing");
  side << j.dump(2) << "\n";
}

PathEnsemble load_ensemble(const std::filesystem::path& dir) {
  std::ifstream side(dir / "ensemble.json");
  if (!side) throw std::runtime_error("cannot open ensemble.json");
  json j;
  side >> j;
  if (j.at("format_version").get<int>() != 1) {
    throw std::runtime_error("unsupported ensemble format version");
  }
  PathEnsemble ens{kernel_from_json(j.at("kernel")),
                   grid_from_json(j.at("grid")),
                   {},
                   j.at("seed").get<std::uint64_t>(),
                   j.at("generator_id").get<std::string>(),
                   j.at("content").get<std::string>() == "increments"
                       ? Content::Increments
                       : Content::ProcessValues,
                   j.value("notes", std::vector<std::string>{})};
  const auto rows = j.at("n_trials").get<Eigen::Index>();
  const auto cols = j.at("n_points").get<Eigen::Index>();
  if (cols != static_cast<Eigen::Index>(ens.grid_size())) {
    throw std::runtime_error("ensemble sidecar grid/point count mismatch");
  }
  ens.values.resize(rows, cols);
  std::ifstream bin(dir / "values.bin", std::ios::binary);
  if (!bin) throw std::runtime_error("cannot open values.bin");
  bin.read(reinterpret_cast<char*>(ens.values.data()),
           static_cast<std::streamsize>(sizeof(double) * ens.values.size()));
  if (bin.gcount() !=
      static_cast<std::streamsize>(sizeof(double) * ens.values.size())) {
    throw std::runtime_error("values.bin truncated");
  }
  if (!ens.values.allFinite()) {
    throw std::runtime_error("ensemble contains non-finite values");
  }
  return ens;
}

void save_ensemble_csv(const PathEnsemble& ens,
                       const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot open csv for writing");
  if (std::holds_alternative<Grid1D>(ens.grid)) {
    const auto& g = std::get<Grid1D>(ens.grid);
    for (std::size_t i = 0; i < g.size(); ++i) {
      out << (i ? "," : "") << "t=" << fmt_double(g.points[i]);
    }
  } else {
    const auto& g = std::get<Grid2D>(ens.grid);
    for (std::size_t i = 0; i < g.size(); ++i) {
      out << (i ? "," : "") << "s=(" << fmt_double(g.points[i].x) << ";"
          << fmt_double(g.points[i].y) << ")";
    }
  }
  out << "\n";
  for (Eigen::Index t = 0; t < ens.values.rows(); ++t) {
    for (Eigen::Index j = 0; j < ens.values.cols(); ++j) {
      out << (j ? "," : "") << fmt_double(ens.values(t, j));
    }
    out << "\n";
  }
}

}  // namespace fbmlab
