#include "ratingdyn/simulator.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "ratingdyn/detail/exact_sum.hpp"
#include "ratingdyn/errors.hpp"
#include "ratingdyn/random_source.hpp"

namespace ratingdyn {

Population make_population(const RatingModel& model, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw DomainError("population size must be at least 1");
  RandomSource rng(seed, 0);
  Population pop{std::vector<double>(n), seed};
  for (auto& r : pop.latents) r = sample_latent(model.latent(), rng);
  return pop;
}

std::vector<std::size_t> random_order(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  RandomSource rng(seed, 0);
  for (std::size_t i = n; i > 1; --i) {
    std::swap(order[i - 1], order[rng.index_below(i)]);
  }
  return order;
}

Trajectory run_sequence(const RatingModel& model, const Population& population,
                        std::span<const std::size_t> order, std::uint64_t lambda_seed,
                        bool keep_path) {
  const std::size_t n = population.latents.size();
  if (order.size() != n) throw DomainError("order length differs from population size");
  {
    std::vector<bool> seen(n, false);
    for (auto idx : order) {
      if (idx >= n || seen[idx]) throw DomainError("order is not a permutation of the population");
      seen[idx] = true;
    }
  }

  Trajectory traj;
  traj.lambda_seed = lambda_seed;
  if (keep_path) {
    traj.running_means.reserve(n);
    traj.ratings.reserve(n);
  }
  RandomSource rng(lambda_seed, 0);
  detail::ExactSum sum;
  double mean = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const UnitValue r(population.latents[order[k]]);
    UnitValue rating = r;
    if (k > 0) {
      const UnitValue x = UnitValue::clamped(mean);
      const UnitValue lambda = sample_lambda(model.kernel(), r, x, rng);
      rating = expressed_rating(lambda, r, x);
    }
    sum.add(rating);
    mean = sum.divided_by(static_cast<double>(k + 1));
    if (keep_path) {
      traj.running_means.push_back(mean);
      traj.ratings.push_back(rating);
    }
  }
  traj.final_mean = mean;
  return traj;
}

ReplicationSeeds replication_seeds(const ReplicationPlan& plan, std::size_t rep) noexcept {
  const std::uint64_t pop_index = plan.fixed_population ? 0 : rep;
  return {derive_seed(plan.base_seed, seed_tag::population, pop_index),
          derive_seed(plan.base_seed, seed_tag::permutation, rep),
          derive_seed(plan.base_seed, seed_tag::lambda, rep)};
}

ReplicationResult run_replications(const RatingModel& model, const ReplicationPlan& plan,
                                   std::span<const double> equilibria, Execution exec) {
  if (plan.n_reps == 0) throw DomainError("n_reps must be at least 1");
  if (plan.n_agents == 0) throw DomainError("n_agents must be at least 1");

  std::optional<Population> shared;
  if (plan.fixed_population) {
    shared = make_population(model, plan.n_agents, replication_seeds(plan, 0).population);
  }

  ReplicationResult result;
  result.summaries.resize(plan.n_reps);
  if (plan.keep_paths) result.trajectories.resize(plan.n_reps);

  for_each_index(plan.n_reps, exec, [&](std::size_t rep) {
    const auto seeds = replication_seeds(plan, rep);
    std::optional<Population> own;
    if (!shared) own = make_population(model, plan.n_agents, seeds.population);
    const Population& pop = shared ? *shared : *own;

    const auto order = random_order(plan.n_agents, seeds.permutation);
    Trajectory traj = run_sequence(model, pop, order, seeds.lambda, plan.keep_paths);
    traj.replication_id = rep;
    traj.permutation_seed = seeds.permutation;

    RunSummary summary{rep, traj.final_mean, std::nullopt, std::nullopt,
                       seeds.population, seeds.permutation, seeds.lambda};
    if (!equilibria.empty()) {
      double best = equilibria.front();
      for (double e : equilibria) {
        if (std::abs(traj.final_mean - e) < std::abs(traj.final_mean - best)) best = e;
      }
      summary.nearest_equilibrium = best;
      summary.distance = std::abs(traj.final_mean - best);
    }
    result.summaries[rep] = summary;
    if (plan.keep_paths) result.trajectories[rep] = std::move(traj);
  });
  return result;
}

}  // namespace ratingdyn
