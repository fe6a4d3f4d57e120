#include "ratingdyn/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ratingdyn/detail/overloaded.hpp"
#include "ratingdyn/errors.hpp"

namespace ratingdyn {

using detail::overloaded;

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be positive and finite");
  }
}

UnitValue sample_distance_beta(double c, double shape, RandomSource& rng) {
  if (c <= kDegenerateRatio) return UnitValue(0.0);
  if (c >= 1.0 - kDegenerateRatio) return UnitValue(1.0);
  return UnitValue::clamped(rng.beta(shape, shape / c - shape));
}

}  // namespace

double distance_ratio(double r, double centre) {
  return std::abs(r - centre) / std::max(centre, 1.0 - centre);
}

InfluenceKernel InfluenceKernel::constant(UnitValue lambda0) { return InfluenceKernel(Constant{lambda0}); }

InfluenceKernel InfluenceKernel::independent_beta(double a, double b) {
  require_positive(a, "independent_beta a");
  require_positive(b, "independent_beta b");
  return InfluenceKernel(IndependentBeta{a, b});
}

InfluenceKernel InfluenceKernel::affine_latent(double intercept, double slope) {
  if (!std::isfinite(intercept) || !std::isfinite(slope)) {
    throw DomainError("affine_latent coefficients must be finite");
  }
  return InfluenceKernel(AffineLatent{intercept, slope});
}

InfluenceKernel InfluenceKernel::latent_only(UnitValue m, double shape) {
  require_positive(shape, "latent_only shape");
  return InfluenceKernel(LatentOnly{m, shape});
}

InfluenceKernel InfluenceKernel::distance(double shape) {
  require_positive(shape, "distance shape");
  return InfluenceKernel(Distance{shape});
}

InfluenceKernel InfluenceKernel::proximity(UnitValue lambda_max) {
  return InfluenceKernel(Proximity{lambda_max});
}

bool InfluenceKernel::depends_on_x() const noexcept {
  return std::holds_alternative<Distance>(v_) || std::holds_alternative<Proximity>(v_);
}

std::string_view InfluenceKernel::name() const noexcept {
  return std::visit(overloaded{
                        [](const Constant&) { return std::string_view("constant"); },
                        [](const IndependentBeta&) { return std::string_view("independent_beta"); },
                        [](const AffineLatent&) { return std::string_view("affine_latent"); },
                        [](const LatentOnly&) { return std::string_view("latent_only"); },
                        [](const Distance&) { return std::string_view("distance"); },
                        [](const Proximity&) { return std::string_view("proximity"); },
                    },
                    v_);
}

std::string InfluenceKernel::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << name() << "(";
  std::visit(overloaded{
                 [&](const Constant& k) { os << k.lambda0.value(); },
                 [&](const IndependentBeta& k) { os << k.a << "," << k.b; },
                 [&](const AffineLatent& k) { os << k.intercept << "," << k.slope; },
                 [&](const LatentOnly& k) { os << k.m.value() << "," << k.shape; },
                 [&](const Distance& k) { os << k.shape; },
                 [&](const Proximity& k) { os << k.lambda_max.value(); },
             },
             v_);
  os << ")";
  return os.str();
}

std::vector<double> InfluenceKernel::kinks(double x) const {
  std::vector<double> out;
  auto keep = [&out](double v) {
    if (v > 0.0 && v < 1.0) out.push_back(v);
  };
  std::visit(overloaded{
                 [](const Constant&) {},
                 [](const IndependentBeta&) {},
                 [&](const AffineLatent& k) {
                   if (k.slope != 0.0) {
                     keep(-k.intercept / k.slope);
                     keep((1.0 - k.intercept) / k.slope);
                   }
                 },
                 [&](const LatentOnly& k) { keep(k.m); },
                 [&](const Distance&) { keep(x); },
                 [&](const Proximity&) { keep(x); },
             },
             v_);
  return out;
}

UnitValue kernel_mean(const InfluenceKernel& kernel, UnitValue r, UnitValue x) {
  using K = InfluenceKernel;
  return std::visit(overloaded{
                        [](const K::Constant& k) { return k.lambda0; },
                        [](const K::IndependentBeta& k) { return UnitValue::clamped(k.a / (k.a + k.b)); },
                        [&](const K::AffineLatent& k) {
                          return UnitValue::clamped(k.intercept + k.slope * r);
                        },
                        // The mean of Beta(s, s/c - s) is exactly c.
                        [&](const K::LatentOnly& k) { return UnitValue::clamped(distance_ratio(r, k.m)); },
                        [&](const K::Distance&) { return UnitValue::clamped(distance_ratio(r, x)); },
                        [&](const K::Proximity& k) {
                          return UnitValue::clamped(k.lambda_max * (1.0 - std::abs(x - r)));
                        },
                    },
                    kernel.variant());
}

UnitValue sample_lambda(const InfluenceKernel& kernel, UnitValue r, UnitValue x, RandomSource& rng) {
  using K = InfluenceKernel;
  return std::visit(overloaded{
                        [](const K::Constant& k) { return k.lambda0; },
                        [&](const K::IndependentBeta& k) { return UnitValue::clamped(rng.beta(k.a, k.b)); },
                        [&](const K::AffineLatent& k) {
                          return UnitValue::clamped(k.intercept + k.slope * r);
                        },
                        [&](const K::LatentOnly& k) {
                          return sample_distance_beta(distance_ratio(r, k.m), k.shape, rng);
                        },
                        [&](const K::Distance& k) {
                          return sample_distance_beta(distance_ratio(r, x), k.shape, rng);
                        },
                        [&](const K::Proximity& k) {
                          return UnitValue::clamped(k.lambda_max * (1.0 - std::abs(x - r)));
                        },
                    },
                    kernel.variant());
}

}  // namespace ratingdyn
