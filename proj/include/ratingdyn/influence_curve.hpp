#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "ratingdyn/model.hpp"
#include "ratingdyn/parallel.hpp"
#include "ratingdyn/random_source.hpp"

namespace ratingdyn {

inline constexpr double kDefaultCurveTol = 1e-10;
inline constexpr std::size_t kDefaultGridSize = 1001;

enum class CurveMethod { quadrature, closed_form, monte_carlo };

std::string_view to_string(CurveMethod m) noexcept;

// One evaluation of the influence curve f(x) = E[R | x].
struct CurvePoint {
  UnitValue x;
  double f_x = 0.0;
  double abs_err = 0.0;
  CurveMethod method = CurveMethod::quadrature;
};

// f(x) = slope * x + intercept, valid when lambda ignores x.
struct LinearCurve {
  double slope = 0.0;      // E[lambda]
  double intercept = 0.0;  // E[(1 - lambda) r]
  double abs_err = 0.0;
};

LinearCurve linear_curve(const RatingModel& model, double tol = kDefaultCurveTol);

// Integrates E[lambda | r, x] (x - r) + r over the latent law. Works for
// every kernel; this is the general nonlinear path.
CurvePoint curve_value_quadrature(const RatingModel& model, UnitValue x,
                                  double tol = kDefaultCurveTol);

// Dispatches to the closed linear form for x-independent kernels and to
// curve_value_quadrature otherwise. Throws NumericalError if the
// integrator fails or the value leaves [0,1] by more than its error bound.
CurvePoint curve_value(const RatingModel& model, UnitValue x, double tol = kDefaultCurveTol);

// One point per grid node, assembled by index.
std::vector<CurvePoint> curve_tabulate(const RatingModel& model, std::span<const double> grid,
                                       double tol = kDefaultCurveTol,
                                       Execution exec = Execution::parallel);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

// Averages n simulated expressed ratings at a fixed observed average x.
MonteCarloEstimate curve_value_mc(const RatingModel& model, UnitValue x, std::size_t n,
                                  RandomSource& rng);

// n equally spaced points on [0,1], endpoints included.
std::vector<double> uniform_grid(std::size_t n);

}  // namespace ratingdyn
