// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "ratingdyn/cli/commands.hpp"
#include "ratingdyn/equilibrium.hpp"
#include "ratingdyn/simulator.hpp"

using namespace ratingdyn;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  std::string name;
  double time_limit_s;  // 0: none
  std::function<Outcome()> check;
};

UnitValue U(double v) { return UnitValue(v); }

const auto kBeta31 = LatentDistribution::beta(3, 1);

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome self_correction() {
  const InfluenceKernel kernels[] = {InfluenceKernel::constant(U(0)), InfluenceKernel::constant(U(0.25)),
                                     InfluenceKernel::constant(U(0.5)), InfluenceKernel::constant(U(0.9)),
                                     InfluenceKernel::independent_beta(2, 2)};
  double worst = 0;
  for (const auto& k : kernels) {
    const auto eqs = find_equilibria(RatingModel(kBeta31, k));
    if (eqs.size() != 1 || eqs[0].stability != Stability::stable) {
      return {false, k.describe() + ": " + std::to_string(eqs.size()) + " equilibria"};
    }
    worst = std::max(worst, std::abs(eqs[0].x_star - 0.75));
  }
  return {worst <= 1e-6, "max |x* - 0.75| = " + fmt("%.3g", worst)};
}

Outcome closed_form_vs_roots() {
  RandomSource rng(20240601, 0);
  RootOptions opts;
  opts.force_quadrature = true;
  double worst = 0;
  for (int i = 0; i < 30; ++i) {
    const auto latent = LatentDistribution::beta(0.1 + 4.9 * rng.uniform(), 0.1 + 4.9 * rng.uniform());
    const InfluenceKernel k = i % 2 == 0 ? InfluenceKernel::affine_latent(rng.uniform(), 2 * rng.uniform() - 1)
                                         : InfluenceKernel::latent_only(U(rng.uniform()), 1 + 4 * rng.uniform());
    const RatingModel m(latent, k);
    const auto eqs = find_equilibria(m, opts);
    if (eqs.size() != 1) return {false, m.describe() + ": " + std::to_string(eqs.size()) + " roots"};
    worst = std::max(worst, std::abs(eqs[0].x_star - closed_form_equilibrium(m)));
  }
  return {worst <= 1e-6, "max |closed form - root| over 30 models = " + fmt("%.3g", worst)};
}

Outcome covariance_distortion() {
  const RatingModel m(kBeta31, InfluenceKernel::affine_latent(0, 1));
  const double r_star = closed_form_equilibrium(m);
  if (std::abs(r_star - 0.6) > 1e-12) return {false, "closed form R* = " + fmt("%.17g", r_star)};
  ReplicationPlan plan;
  plan.n_agents = 100000;
  plan.n_reps = 20;
  plan.base_seed = 0;
  plan.fixed_population = false;
  const std::vector<double> eq{r_star};
  int within = 0;
  double mean = 0;
  for (const auto& s : run_replications(m, plan, eq).summaries) {
    within += *s.distance <= 0.01;
    mean += s.final_mean / plan.n_reps;
  }
  return {within >= 19, "R* = 0.6; " + std::to_string(within) + "/20 final means within 0.01 (need 19), mean " +
                            fmt("%.4f", mean)};
}

Outcome polarized_structure() {
  const auto unimodal = find_equilibria(RatingModel(LatentDistribution::beta(3, 3), InfluenceKernel::distance(3)));
  if (unimodal.size() != 1 || std::abs(unimodal[0].x_star - 0.5) > 1e-6) {
    return {false, "Beta(3,3): " + std::to_string(unimodal.size()) + " equilibria"};
  }
  const RatingModel polar(LatentDistribution::beta(0.3, 0.3), InfluenceKernel::distance(3));
  const auto eqs = find_equilibria(polar);
  if (eqs.size() != 3) return {false, "Beta(0.3,0.3): " + std::to_string(eqs.size()) + " equilibria"};
  const bool labels = eqs[0].stability == Stability::stable && eqs[1].stability == Stability::unstable &&
                      eqs[2].stability == Stability::stable;
  const double mid = std::abs(eqs[1].x_star - 0.5);
  const double sum = std::abs(eqs[0].x_star + eqs[2].x_star - 1);
  const double f0 = std::abs(curve_value(polar, U(0)).f_x - 0.09375);
  return {labels && mid <= 1e-6 && sum <= 1e-6 && f0 <= 1e-7,
          "outer " + fmt("%.6f", eqs[0].x_star) + "/" + fmt("%.6f", eqs[2].x_star) + ", |mid-0.5| " +
              fmt("%.2g", mid) + ", |f(0)-0.09375| " + fmt("%.2g", f0)};
}

Outcome path_dependence() {
  const RatingModel m(LatentDistribution::beta(0.3, 0.3), InfluenceKernel::distance(3));
  const auto eqs = find_equilibria(m);
  const auto stable = stable_points(eqs);
  if (stable.size() != 2) return {false, "expected two stable equilibria"};
  ReplicationPlan plan;
  plan.n_agents = 10000;
  plan.n_reps = 40;
  plan.base_seed = 0;
  plan.fixed_population = true;
  int near = 0, low = 0, high = 0, stuck = 0;
  for (const auto& s : run_replications(m, plan, stable).summaries) {
    near += *s.distance <= 0.02;
    (s.final_mean < 0.5 ? low : high)++;
    stuck += std::abs(s.final_mean - 0.5) <= 0.02 && *s.distance > 0.05;
  }
  return {near >= 38 && low > 0 && high > 0 && stuck == 0,
          std::to_string(near) + "/40 within 0.02 of a stable point (need 38); basins " + std::to_string(low) + "/" +
              std::to_string(high) + "; stuck near 0.5: " + std::to_string(stuck)};
}

Outcome bifurcation() {
  const ModelFamily family = [](double a) {
    return RatingModel(LatentDistribution::beta(a, a / 0.7 - a), InfluenceKernel::distance(3));
  };
  std::vector<double> alphas;
  for (int i = 0; i < 60; ++i) alphas.push_back(0.1 * std::pow(30.0, i / 59.0));
  alphas.back() = 3.0;
  const auto res = bifurcation_sweep(family, alphas);
  if (!res.failures.empty()) return {false, std::to_string(res.failures.size()) + " rows failed"};
  bool found = false;
  std::string where;
  for (const auto& t : res.transitions) {
    if (t.stable_lo == 2 && t.stable_hi == 1 && t.param_lo > 0.25 && t.param_hi < 0.55) found = true;
    where += " (" + fmt("%.4f", t.param_lo) + ", " + fmt("%.4f", t.param_hi) + ")";
  }
  const auto& last = res.rows.back().equilibria;
  const bool unique = last.size() == 1;
  const double offset = unique ? last[0].x_star - 0.7 : 0.0;
  return {found && res.transitions.size() == 1 && unique && std::abs(offset) > 0.005,
          "2->1 transition in" + where + "; alpha=3 x* - 0.7 = " + fmt("%+.5f", offset)};
}

Outcome proximity_uniqueness() {
  RandomSource rng(21, 0);
  for (int i = 0; i < 50; ++i) {
    const RatingModel m(LatentDistribution::beta(0.05 + 5 * rng.uniform(), 0.05 + 5 * rng.uniform()),
                        InfluenceKernel::proximity(U(rng.uniform())));
    if (!uniqueness_check(m)) return {false, "not unique: " + m.describe()};
  }
  return {true, "50/50 unique"};
}

Outcome exact_enumeration() {
  const RatingModel m(LatentDistribution::discrete({{U(0.1), 0.5}, {U(0.9), 0.5}}), InfluenceKernel::distance(3));
  const double exact = 77.0 / 90.0;
  const double q = std::abs(curve_value_quadrature(m, U(0.9)).f_x - exact);
  RandomSource rng(90, 0);
  const auto mc = curve_value_mc(m, U(0.9), 100000, rng);
  const double z = std::abs(mc.estimate - exact) / mc.std_error;
  return {q <= 1e-9 && z <= 4, "quadrature error " + fmt("%.2g", q) + ", Monte Carlo " + fmt("%.2f", z) + " stderr"};
}

Outcome rank_flip() {
  const std::vector<RankItem> items{
      {"A", RatingModel(LatentDistribution::beta(7, 3), InfluenceKernel::independent_beta(2, 2))},
      {"B", RatingModel(kBeta31, InfluenceKernel::affine_latent(0, 1))}};
  const auto rep = rank_preservation(items);
  std::string pairs;
  for (const auto& [a, b] : rep.violations) pairs += " (" + a + "," + b + ")";
  return {rep.violations.size() == 1, "violations:" + pairs};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / ("ratingdyn_accept_" + std::to_string(::getpid()));
  fs::remove_all(root);
  fs::create_directories(root);
  const auto cfg = (root / "config.json").string();
  std::ofstream(cfg) << R"({"latent": {"family": "beta", "alpha": 0.3, "beta": 0.3},
    "kernel": {"type": "distance", "shape": 3}, "seed": 11,
    "bifurcate": {"tie": "symmetric", "values": {"start": 0.1, "stop": 2, "count": 12}},
    "simulate": {"agents": 10000, "reps": 40, "trajectory_stride": 100}})";
  int files = 0;
  std::string bad;
  for (const char* cmd : {"curve", "equilibria", "bifurcate", "simulate", "figures"}) {
    std::ostringstream out, err;
    for (const char* run_dir : {"a", "b"}) {
      const auto dir = (root / run_dir / cmd).string();
      const char* argv[] = {"ratingdyn", cmd, "--config", cfg.c_str(), "--out-dir", dir.c_str()};
      if (cli::run(6, argv, out, err) != 0) bad += std::string(" ") + cmd + "(exit)";
    }
    for (const auto& entry : fs::directory_iterator(root / "a" / cmd)) {
      ++files;
      if (slurp(entry.path()) != slurp(root / "b" / cmd / entry.path().filename())) {
        bad += " " + entry.path().filename().string();
      }
    }
  }
  fs::remove_all(root);
  return {bad.empty() && files == 11, std::to_string(files) + " CSVs compared" + (bad.empty() ? "" : "; differ:" + bad)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"self-correction", 1, self_correction},
      {"closed form vs root finder", 10, closed_form_vs_roots},
      {"covariance distortion", 30, covariance_distortion},
      {"polarized curve structure", 5, polarized_structure},
      {"path dependence", 60, path_dependence},
      {"bifurcation", 60, bifurcation},
      {"proximity uniqueness", 30, proximity_uniqueness},
      {"exact enumeration", 0, exact_enumeration},
      {"rank flip", 0, rank_flip},
      {"determinism", 0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit_s > 0 && secs >= c.time_limit_s) {
      o.pass = false;
      o.detail += "; over time limit " + fmt("%.0f s", c.time_limit_s);
    }
    failed += !o.pass;
    std::printf("%s  %-28s %7.3f s  %s\n", o.pass ? "PASS" : "FAIL", c.name.c_str(), secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
