#include "ratingdyn/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "ratingdyn/errors.hpp"

namespace ratingdyn {

std::string_view to_string(Stability s) noexcept {
  switch (s) {
    case Stability::stable:
      return "stable";
    case Stability::unstable:
      return "unstable";
    case Stability::degenerate:
      return "degenerate";
  }
  return "unknown";
}

namespace {

constexpr double kFullHerding = 1.0 - 1e-9;
constexpr double kSlopeStep = 1e-5;

// Evaluates g(x) = f(x) - x along one model, reusing the linear form when
// the kernel ignores x.
class Drift {
 public:
  Drift(const RatingModel& model, const RootOptions& opts) : model_(model), tol_(opts.curve_tol) {
    if (!model.kernel().depends_on_x()) {
      line_ = linear_curve(model, opts.curve_tol);
      if (line_->slope >= kFullHerding) {
        throw DegenerateModelError("E[lambda] = 1: every point is an equilibrium");
      }
      if (opts.force_quadrature) line_.reset();
    }
  }

  double f(double x) const {
    const auto ux = UnitValue::clamped(x);
    if (line_) return line_->slope * ux + line_->intercept;
    return curve_value_quadrature(model_, ux, tol_).f_x;
  }
  double g(double x) const { return f(x) - x; }

  std::vector<double> tabulate(std::span<const double> grid, Execution exec) const {
    std::vector<double> out(grid.size());
    for_each_index(grid.size(), exec, [&](std::size_t i) { out[i] = g(grid[i]); });
    return out;
  }

  double slope(double x) const {
    const double lo = std::max(0.0, x - kSlopeStep);
    const double hi = std::min(1.0, x + kSlopeStep);
    return (f(hi) - f(lo)) / (hi - lo);
  }

 private:
  const RatingModel& model_;
  double tol_;
  std::optional<LinearCurve> line_;
};

int sign_of(double g, double zero_band) {
  if (std::abs(g) <= zero_band) return 0;
  return g > 0.0 ? 1 : -1;
}

// Bisection on a bracket where g has sign `s_lo` at lo and -s_lo at hi.
double bisect(const Drift& drift, double lo, double hi, int s_lo, double root_tol) {
  while (hi - lo > root_tol) {
    const double mid = 0.5 * (lo + hi);
    const double gm = drift.g(mid);
    if (gm == 0.0) return mid;
    if ((gm > 0.0 ? 1 : -1) == s_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Golden-section minimiser of s*g on [lo, hi].
double minimise_signed(const Drift& drift, double lo, double hi, int s, double root_tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = s * drift.g(c);
  double fd = s * drift.g(d);
  while (b - a > root_tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = s * drift.g(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = s * drift.g(d);
    }
  }
  return 0.5 * (a + b);
}

struct Candidate {
  double x;
  Stability stability;
};

Stability from_signs(int left, int right) {
  if (left > 0 && right < 0) return Stability::stable;
  if (left < 0 && right > 0) return Stability::unstable;
  return Stability::degenerate;
}

}  // namespace

double closed_form_equilibrium(const RatingModel& model, double tol) {
  const auto m = lambda_latent_moments(model, tol);
  if (m.mean_lambda >= kFullHerding) {
    throw DegenerateModelError("E[lambda] = 1: every point is an equilibrium");
  }
  return model.true_mean() - m.cov_lambda_r / (1.0 - m.mean_lambda);
}

std::vector<Equilibrium> find_equilibria(const RatingModel& model, const RootOptions& opts) {
  if (opts.grid_size < 3) throw DomainError("find_equilibria: grid_size must be at least 3");
  if (!(opts.root_tol > 0.0)) throw DomainError("find_equilibria: root_tol must be positive");
  if (!(opts.curve_tol > 0.0)) throw DomainError("find_equilibria: curve_tol must be positive");

  const Drift drift(model, opts);
  const auto grid = uniform_grid(opts.grid_size);
  const auto g = drift.tabulate(grid, opts.exec);
  const std::size_t n = grid.size();
  std::vector<int> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = sign_of(g[i], opts.root_tol);

  std::vector<Candidate> found;

  // Strict sign changes between neighbouring nodes.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (s[i] * s[i + 1] < 0) {
      const double x = bisect(drift, grid[i], grid[i + 1], s[i], opts.root_tol);
      found.push_back({x, s[i] > 0 ? Stability::stable : Stability::unstable});
    }
  }

  // Nodes where |g| is already within the root tolerance.
  for (std::size_t j = 0; j < n;) {
    if (s[j] != 0) {
      ++j;
      continue;
    }
    std::size_t k = j;
    while (k + 1 < n && s[k + 1] == 0) ++k;
    const int left = j > 0 ? s[j - 1] : 0;
    const int right = k + 1 < n ? s[k + 1] : 0;
    Stability st;
    if (j == 0 && k + 1 < n) {
      st = right < 0 ? Stability::stable : Stability::unstable;  // one-sided at x = 0
    } else if (k + 1 == n && j > 0) {
      st = left > 0 ? Stability::stable : Stability::unstable;  // one-sided at x = 1
    } else {
      st = from_signs(left, right);
    }
    double x;
    if (k - j >= 2) {
      // A flat run: a continuum of fixed points, not an isolated one.
      st = Stability::degenerate;
      x = 0.5 * (grid[j] + grid[k]);
    } else {
      x = std::abs(g[j]) <= std::abs(g[k]) ? grid[j] : grid[k];
    }
    found.push_back({x, st});
    j = k + 1;
  }

  // Interior local minima of |g| without a sign change: the curve may touch
  // the diagonal, or cross it twice, inside one grid cell.
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const int si = s[i];
    if (si == 0 || s[i - 1] != si || s[i + 1] != si) continue;
    if (!(std::abs(g[i]) < std::abs(g[i - 1]) && std::abs(g[i]) <= std::abs(g[i + 1]))) continue;
    const double xm = minimise_signed(drift, grid[i - 1], grid[i + 1], si, opts.root_tol);
    const double gm = drift.g(xm);
    if (si * gm < -opts.root_tol) {
      // Hidden pair: si at both ends, -si in the middle.
      const double a = bisect(drift, grid[i - 1], xm, si, opts.root_tol);
      const double b = bisect(drift, xm, grid[i + 1], -si, opts.root_tol);
      found.push_back({a, si > 0 ? Stability::stable : Stability::unstable});
      found.push_back({b, si > 0 ? Stability::unstable : Stability::stable});
    } else if (std::abs(gm) <= opts.root_tol) {
      found.push_back({xm, Stability::degenerate});
    }
  }

  if (found.empty()) {
    throw NumericalError("no equilibrium found for " + model.describe() +
                         " (g(0) >= 0 >= g(1) should guarantee one)");
  }

  std::sort(found.begin(), found.end(), [](const Candidate& a, const Candidate& b) { return a.x < b.x; });
  std::vector<Candidate> unique;
  for (const auto& c : found) {
    if (!unique.empty() && c.x - unique.back().x < 10.0 * opts.root_tol) continue;
    unique.push_back(c);
  }

  std::vector<Equilibrium> out;
  out.reserve(unique.size());
  for (const auto& c : unique) {
    out.push_back({c.x, c.stability, std::abs(drift.g(c.x)), drift.slope(c.x)});
  }
  return out;
}

std::size_t count_stable(std::span<const Equilibrium> eqs) noexcept {
  return static_cast<std::size_t>(std::count_if(
      eqs.begin(), eqs.end(), [](const Equilibrium& e) { return e.stability == Stability::stable; }));
}

std::vector<double> stable_points(std::span<const Equilibrium> eqs) {
  std::vector<double> out;
  for (const auto& e : eqs) {
    if (e.stability == Stability::stable) out.push_back(e.x_star);
  }
  return out;
}

bool uniqueness_check(const RatingModel& model, const RootOptions& opts) {
  const auto eqs = find_equilibria(model, opts);
  return eqs.size() == 1 && eqs.front().stability != Stability::degenerate;
}

BifurcationResult bifurcation_sweep(const ModelFamily& family, std::span<const double> params,
                                    const RootOptions& opts) {
  RootOptions row_opts = opts;
  row_opts.exec = Execution::serial;

  std::vector<std::optional<BifurcationRow>> rows(params.size());
  std::vector<std::string> errors(params.size());
  for_each_index(params.size(), opts.exec, [&](std::size_t i) {
    try {
      const RatingModel model = family(params[i]);
      rows[i] = BifurcationRow{params[i], find_equilibria(model, row_opts)};
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  BifurcationResult result;
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (rows[i]) {
      result.rows.push_back(std::move(*rows[i]));
    } else {
      result.failures.push_back({params[i], errors[i]});
    }
  }
  for (std::size_t i = 1; i < result.rows.size(); ++i) {
    const auto before = count_stable(result.rows[i - 1].equilibria);
    const auto after = count_stable(result.rows[i].equilibria);
    if (before != after) {
      result.transitions.push_back({result.rows[i - 1].param, result.rows[i].param, before, after});
    }
  }
  return result;
}

RankReport rank_preservation(std::span<const RankItem> items, const RootOptions& opts) {
  RankReport report;
  for (const auto& item : items) {
    RankEntry entry{item.label, item.model.true_mean(), std::nullopt, false, {}};
    try {
      if (!item.model.kernel().depends_on_x()) {
        entry.r_star = closed_form_equilibrium(item.model, opts.curve_tol);
      } else {
        const auto eqs = find_equilibria(item.model, opts);
        const auto stable = stable_points(eqs);
        if (stable.size() == 1) {
          entry.r_star = stable.front();
        } else if (stable.size() > 1) {
          entry.path_dependent = true;
        } else {
          entry.failure = "no stable equilibrium";
        }
      }
    } catch (const std::exception& e) {
      entry.failure = e.what();
    }
    report.items.push_back(std::move(entry));
  }
  for (std::size_t i = 0; i < report.items.size(); ++i) {
    for (std::size_t j = i + 1; j < report.items.size(); ++j) {
      const auto& a = report.items[i];
      const auto& b = report.items[j];
      if (!a.r_star || !b.r_star) continue;
      const bool flipped = (a.mu > b.mu && *a.r_star < *b.r_star) || (b.mu > a.mu && *b.r_star < *a.r_star);
      if (flipped) report.violations.emplace_back(a.label, b.label);
    }
  }
  return report;
}

}  // namespace ratingdyn
