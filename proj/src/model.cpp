#include "ratingdyn/model.hpp"

#include "ratingdyn/errors.hpp"

namespace ratingdyn {

LambdaMoments lambda_latent_moments(const RatingModel& model, double tol) {
  const auto& kernel = model.kernel();
  if (kernel.depends_on_x()) {
    throw ModelKindError("kernel " + kernel.describe() +
                         " depends on the observed average; the linear closed form does not apply");
  }
  // x is irrelevant for these kernels; any value will do.
  const UnitValue x(0.5);
  const auto kinks = kernel.kinks(x);
  auto cond_mean = [&](double r) { return kernel_mean(kernel, UnitValue::clamped(r), x).value(); };

  const auto e_lambda = latent_expectation(model.latent(), cond_mean, 0.5 * tol, kinks);
  const auto e_lambda_r =
      latent_expectation(model.latent(), [&](double r) { return cond_mean(r) * r; }, 0.5 * tol, kinks);
  const double mu = model.true_mean();
  return {e_lambda.value, e_lambda_r.value - e_lambda.value * mu, e_lambda.abs_err + e_lambda_r.abs_err};
}

}  // namespace ratingdyn
