#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ratingdyn/random_source.hpp"
#include "ratingdyn/unit_value.hpp"

namespace ratingdyn {

// Below / above these values of the distance ratio c the Beta(s, s/c - s)
// law is replaced by its point-mass limit.
inline constexpr double kDegenerateRatio = 1e-12;

// |r - centre| / max(centre, 1 - centre); always in [0, 1].
double distance_ratio(double r, double centre);

// Conditional law of the influence weight lambda given (r, x).
class InfluenceKernel {
 public:
  struct Constant {
    UnitValue lambda0;
  };
  struct IndependentBeta {
    double a;
    double b;
  };
  // lambda = clamp(intercept + slope * r, 0, 1)
  struct AffineLatent {
    double intercept;
    double slope;
  };
  // c = |r - m| / max(m, 1 - m);  lambda ~ Beta(shape, shape/c - shape)
  struct LatentOnly {
    UnitValue m;
    double shape;
  };
  // c = |r - x| / max(x, 1 - x);  lambda ~ Beta(shape, shape/c - shape)
  struct Distance {
    double shape;
  };
  // lambda = lambda_max * (1 - |x - r|), deterministic
  struct Proximity {
    UnitValue lambda_max;
  };
  using Variant = std::variant<Constant, IndependentBeta, AffineLatent, LatentOnly, Distance, Proximity>;

  static InfluenceKernel constant(UnitValue lambda0);
  static InfluenceKernel independent_beta(double a, double b);
  static InfluenceKernel affine_latent(double intercept, double slope);
  static InfluenceKernel latent_only(UnitValue m, double shape);
  static InfluenceKernel distance(double shape);
  static InfluenceKernel proximity(UnitValue lambda_max);

  const Variant& variant() const noexcept { return v_; }

  // True exactly for distance and proximity.
  bool depends_on_x() const noexcept;

  std::string_view name() const noexcept;
  std::string describe() const;

  // Points in (0,1), as a function of r, where E[lambda | r, x] has a kink.
  std::vector<double> kinks(double x) const;

 private:
  explicit InfluenceKernel(Variant v) : v_(v) {}
  Variant v_;
};

// E[lambda | r, x]
UnitValue kernel_mean(const InfluenceKernel& kernel, UnitValue r, UnitValue x);

UnitValue sample_lambda(const InfluenceKernel& kernel, UnitValue r, UnitValue x, RandomSource& rng);

}  // namespace ratingdyn
