#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ratingdyn/influence_curve.hpp"
#include "ratingdyn/model.hpp"
#include "ratingdyn/parallel.hpp"

namespace ratingdyn {

enum class Stability { stable, unstable, degenerate };

std::string_view to_string(Stability s) noexcept;

// A fixed point f(x*) = x*. Stability comes from the sign pattern of
// g = f - id around x* (+ then - is stable); slope_estimate is a central
// difference of f and only serves as a diagnostic.
struct Equilibrium {
  double x_star = 0.0;
  Stability stability = Stability::degenerate;
  double residual = 0.0;
  double slope_estimate = 0.0;
};

struct RootOptions {
  std::size_t grid_size = kDefaultGridSize;
  double root_tol = 1e-10;
  double curve_tol = 1e-12;
  // Use the general quadrature curve even for x-independent kernels.
  bool force_quadrature = false;
  Execution exec = Execution::parallel;
};

// R* = mu - Cov(lambda, r) / (1 - E[lambda]) for x-independent kernels.
// Throws ModelKindError for x-dependent kernels and DegenerateModelError
// when E[lambda] >= 1 - 1e-9.
double closed_form_equilibrium(const RatingModel& model, double tol = 1e-12);

// Scans g = f - id on a uniform grid, bisects every sign change, and
// reports near-tangent roots as degenerate. Ascending, never empty.
std::vector<Equilibrium> find_equilibria(const RatingModel& model, const RootOptions& opts = {});

std::size_t count_stable(std::span<const Equilibrium> eqs) noexcept;
std::vector<double> stable_points(std::span<const Equilibrium> eqs);

// Exactly one equilibrium, and it is not degenerate.
bool uniqueness_check(const RatingModel& model, const RootOptions& opts = {});

// ---- bifurcation ---------------------------------------------------------

using ModelFamily = std::function<RatingModel(double)>;

struct BifurcationRow {
  double param = 0.0;
  std::vector<Equilibrium> equilibria;
};

// The stable count changes somewhere in (param_lo, param_hi).
struct StableCountTransition {
  double param_lo = 0.0;
  double param_hi = 0.0;
  std::size_t stable_lo = 0;
  std::size_t stable_hi = 0;
};

struct RowFailure {
  double param = 0.0;
  std::string message;
};

struct BifurcationResult {
  std::vector<BifurcationRow> rows;  // successful rows, in parameter order
  std::vector<StableCountTransition> transitions;
  std::vector<RowFailure> failures;
};

// Rows are independent and run under opts.exec; each row's own grid scan
// is serial.
BifurcationResult bifurcation_sweep(const ModelFamily& family, std::span<const double> params,
                                    const RootOptions& opts = {});

// ---- rank preservation ---------------------------------------------------

struct RankItem {
  std::string label;
  RatingModel model;
};

struct RankEntry {
  std::string label;
  double mu = 0.0;
  std::optional<double> r_star;  // unset when path dependent or failed
  bool path_dependent = false;
  std::string failure;  // empty on success
};

struct RankReport {
  std::vector<RankEntry> items;
  // (first, second) in input order: mu ordering and R* ordering disagree.
  std::vector<std::pair<std::string, std::string>> violations;
};

RankReport rank_preservation(std::span<const RankItem> items, const RootOptions& opts = {});

}  // namespace ratingdyn
