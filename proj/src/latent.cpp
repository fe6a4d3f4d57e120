#include "ratingdyn/latent.hpp"

#include <cmath>
#include <sstream>

#include "ratingdyn/detail/overloaded.hpp"
#include "ratingdyn/errors.hpp"

namespace ratingdyn {

using detail::overloaded;

LatentDistribution LatentDistribution::beta(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
    throw DomainError("latent beta shape parameters must be positive and finite");
  }
  return LatentDistribution(
      Beta{alpha, beta, std::make_shared<const quad::BetaIntegrator>(alpha, beta)});
}

LatentDistribution LatentDistribution::point_mass(UnitValue v) {
  return LatentDistribution(PointMass{v});
}

LatentDistribution LatentDistribution::discrete(std::vector<Atom> atoms) {
  if (atoms.empty()) throw DomainError("discrete latent distribution needs at least one atom");
  double total = 0.0;
  for (const auto& a : atoms) {
    if (!(a.probability > 0.0)) throw DomainError("discrete atom probability must be positive");
    total += a.probability;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw DomainError("discrete atom probabilities must sum to 1 (got " + std::to_string(total) +
                      ")");
  }
  return LatentDistribution(Discrete{std::move(atoms)});
}

bool LatentDistribution::is_symmetric() const {
  return std::visit(overloaded{
                        [](const Beta& b) { return b.alpha == b.beta; },
                        [](const PointMass& p) { return p.value.value() == 0.5; },
                        [](const Discrete& d) {
                          for (const auto& a : d.atoms) {
                            bool matched = false;
                            for (const auto& o : d.atoms) {
                              if (std::abs(o.value + a.value - 1.0) < 1e-15 &&
                                  std::abs(o.probability - a.probability) < 1e-15) {
                                matched = true;
                                break;
                              }
                            }
                            if (!matched) return false;
                          }
                          return true;
                        },
                    },
                    family_);
}

std::string LatentDistribution::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(overloaded{
                 [&](const Beta& b) { os << "beta(" << b.alpha << "," << b.beta << ")"; },
                 [&](const PointMass& p) { os << "point_mass(" << p.value.value() << ")"; },
                 [&](const Discrete& d) {
                   os << "discrete{";
                   for (std::size_t i = 0; i < d.atoms.size(); ++i) {
                     if (i) os << ",";
                     os << d.atoms[i].value.value() << ":" << d.atoms[i].probability;
                   }
                   os << "}";
                 },
             },
             family_);
  return os.str();
}

double latent_moment(const LatentDistribution& dist, int k) {
  if (k < 1) throw DomainError("latent_moment: order must be a positive integer");
  return std::visit(overloaded{
                        [k](const LatentDistribution::Beta& b) {
                          // E[r^k] = prod_{j<k} (a+j)/(a+b+j)
                          double m = 1.0;
                          for (int j = 0; j < k; ++j) m *= (b.alpha + j) / (b.alpha + b.beta + j);
                          return m;
                        },
                        [k](const LatentDistribution::PointMass& p) {
                          return std::pow(p.value.value(), k);
                        },
                        [k](const LatentDistribution::Discrete& d) {
                          double m = 0.0;
                          for (const auto& a : d.atoms) m += a.probability * std::pow(a.value.value(), k);
                          return m;
                        },
                    },
                    dist.family());
}

quad::Estimate latent_expectation(const LatentDistribution& dist,
                                  const std::function<double(double)>& h, double tol,
                                  std::span<const double> breakpoints) {
  if (!(tol > 0.0)) throw DomainError("latent_expectation: tolerance must be positive");
  return std::visit(overloaded{
                        [&](const LatentDistribution::Beta& b) {
                          return b.integrator->integrate(h, breakpoints, tol);
                        },
                        [&](const LatentDistribution::PointMass& p) {
                          return quad::Estimate{h(p.value), 0.0};
                        },
                        [&](const LatentDistribution::Discrete& d) {
                          double s = 0.0;
                          for (const auto& a : d.atoms) s += a.probability * h(a.value);
                          return quad::Estimate{s, 0.0};
                        },
                    },
                    dist.family());
}

UnitValue sample_latent(const LatentDistribution& dist, RandomSource& rng) {
  return std::visit(overloaded{
                        [&](const LatentDistribution::Beta& b) {
                          return UnitValue::clamped(rng.beta(b.alpha, b.beta));
                        },
                        [&](const LatentDistribution::PointMass& p) { return p.value; },
                        [&](const LatentDistribution::Discrete& d) {
                          double u = rng.uniform();
                          for (const auto& a : d.atoms) {
                            if (u < a.probability) return a.value;
                            u -= a.probability;
                          }
                          return d.atoms.back().value;
                        },
                    },
                    dist.family());
}

}  // namespace ratingdyn
