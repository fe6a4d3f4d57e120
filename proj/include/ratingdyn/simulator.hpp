#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ratingdyn/model.hpp"
#include "ratingdyn/parallel.hpp"

namespace ratingdyn {

// A fixed set of latent ratings, reproducible from (model, n, seed).
struct Population {
  std::vector<double> latents;
  std::uint64_t seed = 0;
};

Population make_population(const RatingModel& model, std::size_t n, std::uint64_t seed);

// Uniformly random permutation of [0, n) (Fisher-Yates), deterministic in seed.
std::vector<std::size_t> random_order(std::size_t n, std::uint64_t seed);

struct Trajectory {
  std::size_t replication_id = 0;
  std::uint64_t permutation_seed = 0;
  std::uint64_t lambda_seed = 0;
  // Filled only when the path is kept: running mean after each agent and
  // the rating that agent emitted.
  std::vector<double> running_means;
  std::vector<double> ratings;
  double final_mean = 0.0;
};

// Agents rate in `order`. The first agent sees no average and rates r;
// every later agent draws lambda from the kernel at the current average
// and emits lambda * x + (1 - lambda) * r. The running mean is the exact
// sum of the ratings divided by the count, rounded once.
Trajectory run_sequence(const RatingModel& model, const Population& population,
                        std::span<const std::size_t> order, std::uint64_t lambda_seed,
                        bool keep_path = true);

struct RunSummary {
  std::size_t replication_id = 0;
  double final_mean = 0.0;
  std::optional<double> nearest_equilibrium;
  std::optional<double> distance;
  std::uint64_t population_seed = 0;
  std::uint64_t permutation_seed = 0;
  std::uint64_t lambda_seed = 0;
};

struct ReplicationPlan {
  std::size_t n_agents = 10000;
  std::size_t n_reps = 40;
  std::uint64_t base_seed = 0;
  // One population, reshuffled per replication; otherwise a fresh draw each.
  bool fixed_population = true;
  bool keep_paths = false;
};

struct ReplicationResult {
  std::vector<RunSummary> summaries;     // by replication id
  std::vector<Trajectory> trajectories;  // empty unless plan.keep_paths
};

// Seeds used by replication `rep` of a plan.
struct ReplicationSeeds {
  std::uint64_t population;
  std::uint64_t permutation;
  std::uint64_t lambda;
};
ReplicationSeeds replication_seeds(const ReplicationPlan& plan, std::size_t rep) noexcept;

// Each replication is one sequential process; replications run under
// `exec` and are assembled by id.
ReplicationResult run_replications(const RatingModel& model, const ReplicationPlan& plan,
                                   std::span<const double> equilibria,
                                   Execution exec = Execution::parallel);

}  // namespace ratingdyn
