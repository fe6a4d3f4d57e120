#include "ratingdyn/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <queue>
#include <string>

#include "ratingdyn/errors.hpp"

namespace ratingdyn::quad {

GaussRule gauss_jacobi_unit(double p, std::size_t n) {
  if (!(p > -1.0)) throw DomainError("Gauss-Jacobi exponent must exceed -1");
  if (n == 0) throw DomainError("Gauss-Jacobi rule needs at least one node");

  // Monic Jacobi recurrence on [-1,1] for the weight (1-u)^a (1+u)^b with
  // a = 0, b = p; then t = (1+u)/2 turns (1+u)^p into t^p.
  const double a = 0.0;
  const double b = p;
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(n > 1 ? n - 1 : 0);
  diag(0) = (b - a) / (a + b + 2.0);
  for (std::size_t k = 1; k < n; ++k) {
    const double kk = static_cast<double>(k);
    const double s = 2.0 * kk + a + b;
    diag(static_cast<Eigen::Index>(k)) = (b * b - a * a) / (s * (s + 2.0));
    double beta_k;
    if (k == 1) {
      beta_k = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b) * (2.0 + a + b) * (3.0 + a + b));
    } else {
      beta_k = 4.0 * kk * (kk + a) * (kk + b) * (kk + a + b) / (s * s * (s + 1.0) * (s - 1.0));
    }
    sub(static_cast<Eigen::Index>(k - 1)) = std::sqrt(beta_k);
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw NumericalError("Golub-Welsch eigensolve failed");

  const double mass = 1.0 / (p + 1.0);  // integral of t^p over [0,1]
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const double v0 = solver.eigenvectors()(0, ii);
    rule.nodes[i] = 0.5 * (1.0 + solver.eigenvalues()(ii));
    rule.weights[i] = mass * v0 * v0;
  }
  return rule;
}

namespace {

struct Panel {
  double a, b, value, err;
  bool operator<(const Panel& o) const { return err < o.err; }
};

Panel gk21(const std::function<double(double)>& f, double a, double b) {
  double err = 0.0;
  const double v =
      boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, a, b, 0, 0.0, &err);
  return {a, b, v, err};
}

}  // namespace

Estimate adaptive_gk(const std::function<double(double)>& f, double a, double b, double tol,
                     int max_depth) {
  if (!(b > a)) return {};
  // Global refinement: always split the panel with the largest error.
  std::priority_queue<Panel> work;
  std::vector<Panel> done;
  Panel first = gk21(f, a, b);
  double total_err = first.err;
  work.push(first);
  const double min_width = (b - a) * std::ldexp(1.0, -max_depth);
  constexpr std::size_t kMaxPanels = 4096;
  while (!work.empty() && total_err > tol && work.size() + done.size() < kMaxPanels) {
    Panel worst = work.top();
    work.pop();
    if (worst.b - worst.a <= min_width) {
      done.push_back(worst);
      continue;
    }
    const double mid = 0.5 * (worst.a + worst.b);
    Panel lo = gk21(f, worst.a, mid);
    Panel hi = gk21(f, mid, worst.b);
    total_err += lo.err + hi.err - worst.err;
    work.push(lo);
    work.push(hi);
  }
  Estimate out;
  auto add = [&out](const Panel& p) {
    out.value += p.value;
    out.abs_err += p.err;
  };
  for (const auto& p : done) add(p);
  while (!work.empty()) {
    add(work.top());
    work.pop();
  }
  if (!std::isfinite(out.value) || out.abs_err > tol) {
    throw NumericalError("adaptive quadrature on [" + std::to_string(a) + ", " +
                         std::to_string(b) + "] reached error " + std::to_string(out.abs_err) +
                         " > tol " + std::to_string(tol));
  }
  return out;
}

BetaIntegrator::BetaIntegrator(double alpha, double beta) : alpha_(alpha), beta_(beta) {
  if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
    throw DomainError("beta shape parameters must be positive and finite");
  }
  log_beta_fn_ = std::log(boost::math::beta(alpha, beta));
  left_coarse_ = gauss_jacobi_unit(alpha - 1.0, kCoarseNodes);
  left_fine_ = gauss_jacobi_unit(alpha - 1.0, kFineNodes);
  right_coarse_ = gauss_jacobi_unit(beta - 1.0, kCoarseNodes);
  right_fine_ = gauss_jacobi_unit(beta - 1.0, kFineNodes);
}

double BetaIntegrator::density(double r) const {
  if (r <= 0.0 || r >= 1.0) {
    if (r < 0.0 || r > 1.0) return 0.0;
    const double e = r <= 0.0 ? alpha_ - 1.0 : beta_ - 1.0;
    if (e > 0.0) return 0.0;
    if (e == 0.0) return std::exp(-log_beta_fn_);
    return HUGE_VAL;
  }
  return std::exp((alpha_ - 1.0) * std::log(r) + (beta_ - 1.0) * std::log1p(-r) - log_beta_fn_);
}

double BetaIntegrator::jacobi_sum(const GaussRule& rule, const std::function<double(double)>& h,
                                  bool left, double b) const {
  // left:  int_0^b r^(a-1) (1-r)^(b-1) h(r) dr, r = b t
  // right: int_0^b s^(b-1) (1-s)^(a-1) h(1-s) ds, s = b t
  const double own = left ? alpha_ : beta_;
  const double other = (left ? beta_ : alpha_) - 1.0;
  const double log_scale = own * std::log(b) - log_beta_fn_;
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double s = b * rule.nodes[i];
    const double r = left ? s : 1.0 - s;
    sum += rule.weights[i] * std::exp(log_scale + other * std::log1p(-s)) * h(r);
  }
  return sum;
}

Estimate BetaIntegrator::endpoint_piece(const std::function<double(double)>& h, bool left,
                                        double b, double tol, int depth) const {
  const double coarse = jacobi_sum(left ? left_coarse_ : right_coarse_, h, left, b);
  const double fine = jacobi_sum(left ? left_fine_ : right_fine_, h, left, b);
  const double diff = std::abs(fine - coarse);
  if (diff <= tol) return {fine, diff};
  if (depth <= 0) {
    throw NumericalError("beta-weighted endpoint quadrature did not converge (error " +
                         std::to_string(diff) + ")");
  }
  // Keep the weighted rule on the half next to the endpoint; the outer half
  // is regular.
  Estimate inner = endpoint_piece(h, left, 0.5 * b, 0.5 * tol, depth - 1);
  const double lo = left ? 0.5 * b : 1.0 - b;
  const double hi = left ? b : 1.0 - 0.5 * b;
  Estimate outer = adaptive_gk([&](double r) { return h(r) * density(r); }, lo, hi, 0.5 * tol);
  return {inner.value + outer.value, inner.abs_err + outer.abs_err};
}

Estimate BetaIntegrator::integrate(const std::function<double(double)>& h,
                                   std::span<const double> breakpoints, double tol) const {
  if (!(tol > 0.0)) throw DomainError("quadrature tolerance must be positive");

  std::vector<double> cuts{0.0, 0.5, 1.0};
  for (double c : breakpoints) {
    if (c > 0.0 && c < 1.0) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const std::size_t pieces = cuts.size() - 1;
  const double piece_tol = tol / static_cast<double>(pieces);
  Estimate total;
  for (std::size_t i = 0; i < pieces; ++i) {
    const double a = cuts[i];
    const double b = cuts[i + 1];
    Estimate part;
    if (i == 0) {
      part = endpoint_piece(h, true, b, piece_tol, 60);
    } else if (i + 1 == pieces) {
      part = endpoint_piece(h, false, 1.0 - a, piece_tol, 60);
    } else {
      part = adaptive_gk([&](double r) { return h(r) * density(r); }, a, b, piece_tol);
    }
    total.value += part.value;
    total.abs_err += part.abs_err;
  }
  return total;
}

}  // namespace ratingdyn::quad
