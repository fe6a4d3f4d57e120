#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace ratingdyn::quad {

struct Estimate {
  double value = 0.0;
  double abs_err = 0.0;
};

// Gauss rule for the weight t^p on [0, 1], p > -1 (Golub-Welsch on the
// shifted Jacobi recurrence). Exact for polynomials of degree < 2n.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule gauss_jacobi_unit(double p, std::size_t n);

// Adaptive Gauss-Kronrod (21 points) with an absolute tolerance. Throws
// NumericalError if the bisection budget (depth, or 4096 panels) is
// exhausted before `tol` is met.
Estimate adaptive_gk(const std::function<double(double)>& f, double a, double b, double tol,
                     int max_depth = 40);

// Computes E[h(r)] for r ~ Beta(alpha, beta).
//
// [0,1] is cut at the supplied breakpoints (kinks of h). The two pieces that
// touch 0 and 1 are integrated with Gauss-Jacobi rules carrying the
// r^(alpha-1) resp. (1-r)^(beta-1) factor, so endpoint singularities for
// shapes below one cost nothing; those pieces are refined geometrically
// towards the endpoint. Interior pieces use adaptive_gk on the density.
class BetaIntegrator {
 public:
  static constexpr std::size_t kCoarseNodes = 20;
  static constexpr std::size_t kFineNodes = 40;

  BetaIntegrator(double alpha, double beta);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }

  double density(double r) const;

  Estimate integrate(const std::function<double(double)>& h, std::span<const double> breakpoints,
                     double tol) const;

 private:
  // Integral of h * density over [0, b] (left) or [1-b, 1] (right).
  Estimate endpoint_piece(const std::function<double(double)>& h, bool left, double b, double tol,
                          int depth) const;
  double jacobi_sum(const GaussRule& rule, const std::function<double(double)>& h, bool left,
                    double b) const;

  double alpha_;
  double beta_;
  double log_beta_fn_;
  GaussRule left_coarse_, left_fine_;
  GaussRule right_coarse_, right_fine_;
};

}  // namespace ratingdyn::quad
