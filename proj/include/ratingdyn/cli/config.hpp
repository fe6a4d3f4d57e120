#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ratingdyn/equilibrium.hpp"
#include "ratingdyn/influence_curve.hpp"
#include "ratingdyn/model.hpp"

namespace ratingdyn::cli {

// Invalid configuration; the message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Either `points` equally spaced nodes on [0,1], or start:stop:step.
struct GridSpec {
  std::optional<std::size_t> points = kDefaultGridSize;
  double start = 0.0;
  double stop = 1.0;
  double step = 0.0;

  std::vector<double> nodes() const;
};

// Accepts "start:stop:step", a node count ("101"), or the JSON forms
// {"points": n} / {"start": a, "stop": b, "step": h}.
GridSpec parse_grid(const nlohmann::json& j, const std::string& path);

struct CurveBlock {
  GridSpec grid;
  double tol = kDefaultCurveTol;
};

struct EquilibriaBlock {
  std::size_t grid_size = kDefaultGridSize;
  double root_tol = 1e-10;
  double curve_tol = 1e-12;

  RootOptions options() const;
};

// Explicit list, or `count` values from start to stop (linear or log).
struct SweepValues {
  std::vector<double> list;
  double start = 0.1;
  double stop = 3.0;
  std::size_t count = 60;
  bool log_spacing = true;

  std::vector<double> values() const;
};

struct BifurcateBlock {
  // latent.alpha, latent.beta, or kernel.<numeric field>
  std::string parameter = "latent.alpha";
  // latent.alpha only: none | symmetric (beta = alpha) | mean (beta = alpha/mean - alpha)
  std::string tie = "none";
  double mean = 0.7;
  SweepValues values;
  EquilibriaBlock roots;
};

struct SimulateBlock {
  std::size_t agents = 10000;
  std::size_t reps = 40;
  bool fixed_population = true;
  // 0 disables trajectory.csv
  std::size_t trajectory_stride = 0;
};

struct FiguresBlock {
  std::size_t grid_points = 101;
  std::size_t fig1b_lines = 10;
  std::size_t fig1b_agents = 10000;
  std::size_t fig2_agents = 10000;
  std::size_t fig2_reps = 40;
  std::size_t fig3_count = 60;
  double fig3_min = 0.1;
  double fig3_max = 3.0;
  std::size_t trajectory_stride = 10;
};

struct Config {
  // Canonical JSON of the model blocks, kept so that parameter sweeps can
  // rebuild a model with one field replaced.
  std::optional<nlohmann::json> latent_json;
  std::optional<nlohmann::json> kernel_json;
  std::optional<LatentDistribution> latent;
  std::optional<InfluenceKernel> kernel;

  std::uint64_t seed = 0;
  std::string out_dir = ".";
  CurveBlock curve;
  EquilibriaBlock equilibria;
  BifurcateBlock bifurcate;
  SimulateBlock simulate;
  FiguresBlock figures;

  // Throws ConfigError when the latent or kernel block is missing.
  RatingModel model() const;
};

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::string> grid;
  std::optional<std::size_t> reps;
  std::optional<std::size_t> agents;
};

LatentDistribution parse_latent(const nlohmann::json& j, const std::string& path);
InfluenceKernel parse_kernel(const nlohmann::json& j, const std::string& path);

Config parse_config(const nlohmann::json& j);
Config load_config(const std::string& file);
void apply_overrides(Config& config, const Overrides& o);

// Fully resolved form: every default filled in. parse_config(to_json(c))
// resolves to the same JSON.
nlohmann::json to_json(const Config& c);

ModelFamily make_family(const Config& c);

}  // namespace ratingdyn::cli
