#pragma once

#include <string>

#include "ratingdyn/kernel.hpp"
#include "ratingdyn/latent.hpp"
#include "ratingdyn/unit_value.hpp"

namespace ratingdyn {

// Latent opinion law plus influence kernel: the full generative model of
// one sequential rating process. Immutable and cheap to copy.
class RatingModel {
 public:
  RatingModel(LatentDistribution latent, InfluenceKernel kernel)
      : latent_(std::move(latent)), kernel_(std::move(kernel)) {}

  const LatentDistribution& latent() const noexcept { return latent_; }
  const InfluenceKernel& kernel() const noexcept { return kernel_; }

  // E[r]
  double true_mean() const { return latent_moment(latent_, 1); }

  std::string describe() const { return latent_.describe() + " / " + kernel_.describe(); }

 private:
  LatentDistribution latent_;
  InfluenceKernel kernel_;
};

// lambda * x + (1 - lambda) * r
inline UnitValue expressed_rating(UnitValue lambda, UnitValue r, UnitValue x) {
  return UnitValue::clamped(lambda * x + (1.0 - lambda) * r);
}

struct LambdaMoments {
  double mean_lambda = 0.0;   // E[lambda]
  double cov_lambda_r = 0.0;  // Cov(lambda, r)
  double abs_err = 0.0;
};

// Moments of (lambda, r) for kernels that ignore x. Throws ModelKindError
// for x-dependent kernels.
LambdaMoments lambda_latent_moments(const RatingModel& model, double tol = 1e-12);

}  // namespace ratingdyn
