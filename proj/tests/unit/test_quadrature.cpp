#include <doctest.h>

#include <cmath>

#include <boost/math/special_functions/beta.hpp>

#include "oracles.hpp"
#include "ratingdyn/errors.hpp"
#include "ratingdyn/quadrature.hpp"

using namespace ratingdyn;
using namespace ratingdyn::quad;

TEST_SUITE("quadrature") {
  TEST_CASE("Gauss-Jacobi rule integrates t^p * t^k exactly") {
    for (double p : {-0.7, 0.0, 0.5, 2.0}) {
      const auto rule = gauss_jacobi_unit(p, 12);
      for (int k = 0; k < 24; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * std::pow(rule.nodes[i], k);
        CHECK(s == doctest::Approx(1.0 / (p + k + 1)).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("adaptive_gk on smooth and kinked integrands") {
    auto e = adaptive_gk([](double t) { return std::sin(t); }, 0.0, M_PI, 1e-12);
    CHECK(std::abs(e.value - 2.0) < 1e-12);
    e = adaptive_gk([](double t) { return std::abs(t - 0.3); }, 0.0, 1.0, 1e-10);
    CHECK(std::abs(e.value - (0.045 + 0.245)) < 1e-10);
  }

  TEST_CASE("adaptive_gk reports failure instead of returning a bad value") {
    CHECK_THROWS_AS(adaptive_gk([](double t) { return 1.0 / std::sqrt(std::abs(t - 0.5)) * std::sin(1.0 / (t - 0.5)); },
                                0.0, 1.0, 1e-14, 6),
                    NumericalError);
  }

  TEST_CASE("BetaIntegrator moments with singular endpoints") {
    for (auto [a, b] : {std::pair{0.3, 0.3}, {0.1, 2.5}, {3.0, 1.0}, {0.7, 0.05}}) {
      BetaIntegrator bi(a, b);
      const auto m1 = bi.integrate([](double r) { return r; }, {}, 1e-12);
      const auto m2 = bi.integrate([](double r) { return r * r; }, {}, 1e-12);
      CHECK(std::abs(m1.value - a / (a + b)) < 1e-11);
      CHECK(std::abs(m2.value - a * (a + 1) / ((a + b) * (a + b + 1))) < 1e-11);
    }
  }

  TEST_CASE("BetaIntegrator agrees with a tanh-sinh oracle on kinked integrands") {
    const double cut[] = {0.37};
    for (auto [a, b] : {std::pair{0.3, 0.3}, {2.0, 5.0}, {0.5, 1.5}}) {
      auto h = [](double r) { return std::abs(r - 0.37) * std::exp(r); };
      BetaIntegrator bi(a, b);
      const auto est = bi.integrate(h, cut, 1e-12);
      CHECK(std::abs(est.value - oracle::beta_expectation(a, b, h, {0.37})) < 1e-10);
      CHECK(est.abs_err <= 1e-12);
    }
  }
}
