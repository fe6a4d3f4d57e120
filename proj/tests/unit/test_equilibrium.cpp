#include <doctest.h>

#include <cmath>

#include "ratingdyn/equilibrium.hpp"
#include "ratingdyn/errors.hpp"

using namespace ratingdyn;

namespace {

UnitValue U(double v) { return UnitValue(v); }

RatingModel distance_model(double a, double b) {
  return RatingModel(LatentDistribution::beta(a, b), InfluenceKernel::distance(3));
}

const auto kBeta31 = LatentDistribution::beta(3, 1);

void check_alternation(const std::vector<Equilibrium>& eqs) {
  REQUIRE(!eqs.empty());
  for (std::size_t i = 1; i < eqs.size(); ++i) CHECK(eqs[i].x_star > eqs[i - 1].x_star);
  std::vector<Equilibrium> strict;
  for (const auto& e : eqs) {
    if (e.stability != Stability::degenerate) strict.push_back(e);
  }
  if (strict.size() != eqs.size()) return;
  CHECK(eqs.front().stability == Stability::stable);
  CHECK(eqs.back().stability == Stability::stable);
  for (std::size_t i = 1; i < eqs.size(); ++i) CHECK(eqs[i].stability != eqs[i - 1].stability);
}

}  // namespace

TEST_SUITE("equilibrium") {
  TEST_CASE("closed_form_equilibrium examples") {
    for (auto [a, b] : {std::pair{2.0, 2.0}, {0.5, 3.0}, {9.0, 1.0}}) {
      CHECK(std::abs(closed_form_equilibrium(RatingModel(kBeta31, InfluenceKernel::independent_beta(a, b))) - 0.75) <
            1e-12);
    }
    CHECK(std::abs(closed_form_equilibrium(RatingModel(kBeta31, InfluenceKernel::affine_latent(0, 1))) - 0.6) < 1e-12);
    CHECK(std::abs(closed_form_equilibrium(RatingModel(kBeta31, InfluenceKernel::affine_latent(1, -1))) - 0.8) <
          1e-12);
  }

  TEST_CASE("closed_form_equilibrium errors") {
    CHECK_THROWS_AS(closed_form_equilibrium(distance_model(1, 1)), ModelKindError);
    CHECK_THROWS_AS(closed_form_equilibrium(RatingModel(kBeta31, InfluenceKernel::constant(U(1.0)))),
                    DegenerateModelError);
  }

  TEST_CASE("find_equilibria examples") {
    auto eqs = find_equilibria(RatingModel(kBeta31, InfluenceKernel::constant(U(0.4))));
    REQUIRE(eqs.size() == 1);
    CHECK(std::abs(eqs[0].x_star - 0.75) < 1e-9);
    CHECK(eqs[0].stability == Stability::stable);

    eqs = find_equilibria(distance_model(3, 3));
    REQUIRE(eqs.size() == 1);
    CHECK(std::abs(eqs[0].x_star - 0.5) < 1e-9);
    CHECK(eqs[0].stability == Stability::stable);

    eqs = find_equilibria(distance_model(0.3, 0.3));
    REQUIRE(eqs.size() == 3);
    CHECK(eqs[0].stability == Stability::stable);
    CHECK(eqs[1].stability == Stability::unstable);
    CHECK(eqs[2].stability == Stability::stable);
    CHECK(std::abs(eqs[1].x_star - 0.5) < 1e-6);
    CHECK(std::abs(eqs[0].x_star + eqs[2].x_star - 1.0) < 1e-6);
  }

  TEST_CASE("outer roots of the polarized model agree with a Monte Carlo curve") {
    const auto m = distance_model(0.3, 0.3);
    const auto eqs = find_equilibria(m);
    REQUIRE(eqs.size() == 3);
    RandomSource rng(17, 0);
    for (const auto& e : {eqs[0], eqs[2]}) {
      const auto mc = curve_value_mc(m, U(e.x_star), 200000, rng);
      CHECK(std::abs(mc.estimate - e.x_star) < 4 * mc.std_error);
    }
  }

  TEST_CASE("residuals and slope consistency") {
    const RatingModel models[] = {distance_model(0.3, 0.3), distance_model(0.1, 0.2), distance_model(3, 3),
                                  RatingModel(kBeta31, InfluenceKernel::affine_latent(0, 1)),
                                  RatingModel(LatentDistribution::beta(0.2, 0.2), InfluenceKernel::proximity(U(1)))};
    for (const auto& m : models) {
      const RootOptions opts;
      for (const auto& e : find_equilibria(m, opts)) {
        CHECK(e.residual <= opts.root_tol);
        if (e.stability == Stability::stable) CHECK(e.slope_estimate < 1 + 1e-3);
        if (e.stability == Stability::unstable) CHECK(e.slope_estimate > 1 - 1e-3);
      }
    }
  }

  TEST_CASE("existence and alternation over random models") {
    RandomSource rng(555, 0);
    for (int i = 0; i < 20; ++i) {
      const double a = 0.05 + 3 * rng.uniform(), b = 0.05 + 3 * rng.uniform();
      const RatingModel m(LatentDistribution::beta(a, b),
                          i % 2 ? InfluenceKernel::distance(3) : InfluenceKernel::proximity(U(rng.uniform())));
      CAPTURE(a);
      CAPTURE(b);
      check_alternation(find_equilibria(m));
    }
  }

  TEST_CASE("linear-case agreement with the closed form") {
    RandomSource rng(808, 0);
    RootOptions opts;
    opts.force_quadrature = true;
    for (int i = 0; i < 30; ++i) {
      const auto latent = LatentDistribution::beta(0.1 + 5 * rng.uniform(), 0.1 + 5 * rng.uniform());
      const InfluenceKernel k = i % 2 ? InfluenceKernel::affine_latent(rng.uniform(), 0.9 * (rng.uniform() - 0.5))
                                      : InfluenceKernel::latent_only(U(rng.uniform()), 1 + 4 * rng.uniform());
      const RatingModel m(latent, k);
      const auto eqs = find_equilibria(m, opts);
      REQUIRE(eqs.size() == 1);
      CHECK(std::abs(eqs[0].x_star - closed_form_equilibrium(m)) <= 1e-6);
    }
  }

  TEST_CASE("self-correction for independent kernels") {
    RandomSource rng(909, 0);
    for (int i = 0; i < 30; ++i) {
      const auto latent = LatentDistribution::beta(0.1 + 5 * rng.uniform(), 0.1 + 5 * rng.uniform());
      const InfluenceKernel k = i % 2 ? InfluenceKernel::constant(U(0.95 * rng.uniform()))
                                      : InfluenceKernel::independent_beta(0.2 + 5 * rng.uniform(), 0.2 + 5 * rng.uniform());
      const RatingModel m(latent, k);
      const auto eqs = find_equilibria(m);
      REQUIRE(eqs.size() == 1);
      CHECK(std::abs(eqs[0].x_star - m.true_mean()) <= 1e-6);
    }
  }

  TEST_CASE("symmetric pitchfork") {
    for (double a : {0.05, 0.1, 0.2, 0.3, 0.45, 0.6, 1.0}) {
      const auto eqs = find_equilibria(distance_model(a, a));
      CAPTURE(a);
      if (eqs.size() == 3) {
        CHECK(std::abs(eqs[1].x_star - 0.5) < 1e-6);
        CHECK(std::abs(eqs[0].x_star + eqs[2].x_star - 1.0) < 1e-6);
      } else {
        REQUIRE(eqs.size() == 1);
        CHECK(std::abs(eqs[0].x_star - 0.5) < 1e-6);
      }
    }
  }

  TEST_CASE("uniqueness_check examples") {
    CHECK(uniqueness_check(RatingModel(LatentDistribution::beta(0.3, 0.3), InfluenceKernel::proximity(U(0.8)))));
    CHECK_FALSE(uniqueness_check(distance_model(0.3, 0.3)));
    CHECK(uniqueness_check(RatingModel(kBeta31, InfluenceKernel::constant(U(0.5)))));
    CHECK(uniqueness_check(RatingModel(LatentDistribution::beta(0.1, 5), InfluenceKernel::constant(U(0.5)))));
  }

  TEST_CASE("proximity kernels always give a unique equilibrium") {
    RandomSource rng(2101, 0);
    for (int i = 0; i < 50; ++i) {
      const double a = 0.05 + 5 * rng.uniform(), b = 0.05 + 5 * rng.uniform(), lm = rng.uniform();
      CAPTURE(a);
      CAPTURE(b);
      CAPTURE(lm);
      CHECK(uniqueness_check(RatingModel(LatentDistribution::beta(a, b), InfluenceKernel::proximity(U(lm)))));
    }
  }

  TEST_CASE("full herding is an explicit error") {
    // constant(1): g is identically zero, every point is a fixed point.
    CHECK_THROWS_AS(find_equilibria(RatingModel(kBeta31, InfluenceKernel::constant(U(1.0)))), DegenerateModelError);
  }

  TEST_CASE("bifurcation examples") {
    const ModelFamily fig3 = [](double a) { return distance_model(a, a / 0.7 - a); };
    std::vector<double> alphas;
    for (int i = 0; i < 60; ++i) alphas.push_back(0.1 * std::pow(30.0, i / 59.0));
    const auto res = bifurcation_sweep(fig3, alphas);
    CHECK(res.failures.empty());
    REQUIRE(res.transitions.size() == 1);
    CHECK(res.transitions[0].stable_lo == 2);
    CHECK(res.transitions[0].stable_hi == 1);
    CHECK(res.transitions[0].param_lo > 0.25);
    CHECK(res.transitions[0].param_hi < 0.55);
    for (const auto& row : res.rows) check_alternation(row.equilibria);

    const ModelFamily constant = [](double l) { return RatingModel(kBeta31, InfluenceKernel::constant(U(l))); };
    const std::vector<double> ls{0.0, 0.3, 0.6, 0.9};
    for (const auto& row : bifurcation_sweep(constant, ls).rows) {
      REQUIRE(row.equilibria.size() == 1);
      CHECK(std::abs(row.equilibria[0].x_star - 0.75) < 1e-9);
    }

    const ModelFamily sym = [](double a) { return distance_model(a, a); };
    const std::vector<double> as{0.1, 0.25, 0.4, 2.0};
    for (const auto& row : bifurcation_sweep(sym, as).rows) {
      const auto& e = row.equilibria;
      for (std::size_t i = 0; i < e.size(); ++i) CHECK(std::abs(e[i].x_star + e[e.size() - 1 - i].x_star - 1) < 1e-6);
    }
  }

  TEST_CASE("bifurcation records failed rows and keeps going") {
    const ModelFamily f = [](double a) {
      if (a > 1.0) throw NumericalError("synthetic");
      return distance_model(a, a);
    };
    const std::vector<double> ps{0.5, 2.0, 0.9};
    const auto res = bifurcation_sweep(f, ps);
    CHECK(res.rows.size() == 2);
    REQUIRE(res.failures.size() == 1);
    CHECK(res.failures[0].param == 2.0);
  }

  TEST_CASE("rank_preservation examples") {
    // mean 0.7 latent with an independent kernel against lambda = r on Beta(3,1)
    const RankItem a{"A", RatingModel(LatentDistribution::beta(7, 3), InfluenceKernel::independent_beta(2, 2))};
    const RankItem b{"B", RatingModel(kBeta31, InfluenceKernel::affine_latent(0, 1))};
    const std::vector<RankItem> pair{a, b};
    auto rep = rank_preservation(pair);
    REQUIRE(rep.violations.size() == 1);
    CHECK(rep.violations[0] == std::pair<std::string, std::string>{"A", "B"});
    CHECK(std::abs(*rep.items[0].r_star - 0.7) < 1e-9);
    CHECK(std::abs(*rep.items[1].r_star - 0.6) < 1e-9);

    const std::vector<RankItem> indep{
        {"x", RatingModel(LatentDistribution::beta(2, 5), InfluenceKernel::independent_beta(1, 1))},
        {"y", RatingModel(LatentDistribution::beta(5, 2), InfluenceKernel::constant(U(0.8)))},
        {"z", RatingModel(LatentDistribution::beta(1, 1), InfluenceKernel::independent_beta(4, 1))}};
    CHECK(rank_preservation(indep).violations.empty());

    const std::vector<RankItem> single{a};
    CHECK(rank_preservation(single).violations.empty());
  }

  TEST_CASE("path dependent items are flagged and skipped") {
    const std::vector<RankItem> items{{"polar", distance_model(0.3, 0.3)},
                                      {"B", RatingModel(kBeta31, InfluenceKernel::affine_latent(0, 1))}};
    const auto rep = rank_preservation(items);
    CHECK(rep.items[0].path_dependent);
    CHECK_FALSE(rep.items[0].r_star.has_value());
    CHECK(rep.violations.empty());
  }
}
