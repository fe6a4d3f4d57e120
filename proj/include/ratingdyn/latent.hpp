#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ratingdyn/quadrature.hpp"
#include "ratingdyn/random_source.hpp"
#include "ratingdyn/unit_value.hpp"

namespace ratingdyn {

// Distribution of the independent (latent) opinions r on [0,1].
class LatentDistribution {
 public:
  struct Beta {
    double alpha;
    double beta;
    std::shared_ptr<const quad::BetaIntegrator> integrator;
  };
  struct PointMass {
    UnitValue value;
  };
  struct Atom {
    UnitValue value;
    double probability;
  };
  struct Discrete {
    std::vector<Atom> atoms;
  };
  using Family = std::variant<Beta, PointMass, Discrete>;

  static LatentDistribution beta(double alpha, double beta);
  static LatentDistribution point_mass(UnitValue v);
  // Probabilities must be strictly positive and sum to 1 within 1e-12.
  static LatentDistribution discrete(std::vector<Atom> atoms);

  const Family& family() const noexcept { return family_; }
  bool is_beta() const noexcept { return std::holds_alternative<Beta>(family_); }

  // Symmetric about 1/2 (Beta(a,a), a point mass at 1/2, mirrored atoms).
  bool is_symmetric() const;

  std::string describe() const;

 private:
  explicit LatentDistribution(Family f) : family_(std::move(f)) {}
  Family family_;
};

// E[r^k] for k >= 1; exact for atoms, closed form for Beta.
double latent_moment(const LatentDistribution& dist, int k);

// E[h(r)] with estimated absolute error. `breakpoints` lists the points in
// (0,1) where h has kinks; they are only used by the Beta path.
quad::Estimate latent_expectation(const LatentDistribution& dist,
                                  const std::function<double(double)>& h, double tol,
                                  std::span<const double> breakpoints = {});

UnitValue sample_latent(const LatentDistribution& dist, RandomSource& rng);

}  // namespace ratingdyn
