#include "ratingdyn/influence_curve.hpp"

#include <cmath>
#include <string>

#include "ratingdyn/errors.hpp"

namespace ratingdyn {

std::string_view to_string(CurveMethod m) noexcept {
  switch (m) {
    case CurveMethod::quadrature:
      return "quadrature";
    case CurveMethod::closed_form:
      return "closed_form";
    case CurveMethod::monte_carlo:
      return "monte_carlo";
  }
  return "unknown";
}

namespace {

// f is an expectation of a [0,1] quantity; anything else means the
// integrator went wrong.
void check_range(const CurvePoint& p, double tol) {
  const double slack = p.abs_err + tol;
  if (!std::isfinite(p.f_x) || p.f_x < -slack || p.f_x > 1.0 + slack) {
    throw NumericalError("influence curve value " + std::to_string(p.f_x) + " at x=" +
                         std::to_string(p.x.value()) + " is outside [0,1]");
  }
}

CurvePoint eval_linear(const LinearCurve& line, UnitValue x) {
  return {x, line.slope * x + line.intercept, line.abs_err, CurveMethod::closed_form};
}

}  // namespace

LinearCurve linear_curve(const RatingModel& model, double tol) {
  const auto m = lambda_latent_moments(model, tol);
  const double mu = model.true_mean();
  // E[(1 - lambda) r] = mu - E[lambda r] = mu - Cov - E[lambda] mu
  return {m.mean_lambda, mu - m.cov_lambda_r - m.mean_lambda * mu, m.abs_err};
}

CurvePoint curve_value_quadrature(const RatingModel& model, UnitValue x, double tol) {
  const auto& kernel = model.kernel();
  auto kinks = kernel.kinks(x);
  kinks.push_back(x);
  const auto drift = latent_expectation(
      model.latent(),
      [&](double r) { return kernel_mean(kernel, UnitValue::clamped(r), x).value() * (x - r); }, tol,
      kinks);
  CurvePoint p{x, model.true_mean() + drift.value, drift.abs_err, CurveMethod::quadrature};
  check_range(p, tol);
  return p;
}

CurvePoint curve_value(const RatingModel& model, UnitValue x, double tol) {
  if (!(tol > 0.0)) throw DomainError("curve tolerance must be positive");
  if (model.kernel().depends_on_x()) return curve_value_quadrature(model, x, tol);
  auto p = eval_linear(linear_curve(model, tol), x);
  check_range(p, tol);
  return p;
}

std::vector<CurvePoint> curve_tabulate(const RatingModel& model, std::span<const double> grid,
                                       double tol, Execution exec) {
  if (!(tol > 0.0)) throw DomainError("curve tolerance must be positive");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0 && grid[i] <= 1.0)) throw DomainError("curve grid node outside [0,1]");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw DomainError("curve grid must be strictly increasing");
  }
  std::vector<CurvePoint> out(grid.size());
  if (!model.kernel().depends_on_x()) {
    const auto line = linear_curve(model, tol);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      out[i] = eval_linear(line, UnitValue(grid[i]));
      check_range(out[i], tol);
    }
    return out;
  }
  for_each_index(grid.size(), exec,
                 [&](std::size_t i) { out[i] = curve_value_quadrature(model, UnitValue(grid[i]), tol); });
  return out;
}

MonteCarloEstimate curve_value_mc(const RatingModel& model, UnitValue x, std::size_t n,
                                  RandomSource& rng) {
  if (n < 2) throw DomainError("curve_value_mc needs at least two draws");
  // Welford running mean / variance.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = sample_latent(model.latent(), rng);
    const auto lambda = sample_lambda(model.kernel(), r, x, rng);
    const double rating = expressed_rating(lambda, r, x);
    const double delta = rating - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (rating - mean);
  }
  const double var = m2 / static_cast<double>(n - 1);
  return {mean, std::sqrt(var / static_cast<double>(n))};
}

std::vector<double> uniform_grid(std::size_t n) {
  if (n < 2) throw DomainError("uniform grid needs at least two points");
  std::vector<double> g(n);
  const double step = 1.0 / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) g[i] = static_cast<double>(i) * step;
  g.back() = 1.0;
  return g;
}

}  // namespace ratingdyn
