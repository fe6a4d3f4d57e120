#include "ratingdyn/cli/commands.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>

#include "ratingdyn/errors.hpp"
#include "ratingdyn/random_source.hpp"
#include "ratingdyn/simulator.hpp"

namespace ratingdyn::cli {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string metadata_line(std::string_view command, const Config& config) {
  json j = to_json(config);
  j.erase("out_dir");
  return "# ratingdyn " + std::string(command) + " config=" + j.dump() + "\n";
}

CsvWriter::CsvWriter(std::string_view command, const Config& config, std::vector<std::string> columns)
    : text_(metadata_line(command, config)), columns_(columns.size()) {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) text_ += ',';
    text_ += columns[i];
  }
  text_ += '\n';
}

void CsvWriter::separator() {
  if (filled_ == columns_) throw std::logic_error("CSV row has too many cells");
  if (filled_++) text_ += ',';
}

CsvWriter& CsvWriter::cell(double v) {
  separator();
  text_ += format_double(v);
  return *this;
}

CsvWriter& CsvWriter::cell(std::uint64_t v) {
  separator();
  text_ += std::to_string(v);
  return *this;
}

CsvWriter& CsvWriter::cell(std::string_view s) {
  separator();
  text_ += s;
  return *this;
}

CsvWriter& CsvWriter::empty() {
  separator();
  return *this;
}

void CsvWriter::end_row() {
  if (filled_ != columns_) throw std::logic_error("CSV row has too few cells");
  text_ += '\n';
  filled_ = 0;
}

OutputFile CsvWriter::finish(std::string name) && {
  if (filled_ != 0) throw std::logic_error("unfinished CSV row");
  return {std::move(name), std::move(text_)};
}

namespace {

bool keep_step(std::size_t step, std::size_t n, std::size_t stride) {
  return step == 1 || step == n || step % stride == 0;
}

void warn(std::ostream& log, const std::string& msg) { log << "ratingdyn: warning: " << msg << '\n'; }

RatingModel figure_model(double alpha_latent, double beta_latent) {
  return RatingModel(LatentDistribution::beta(alpha_latent, beta_latent), InfluenceKernel::distance(3.0));
}

void add_curve_rows(CsvWriter& csv, const RatingModel& model, const std::vector<double>& grid,
                    double tol, const std::string& line, double extra1, std::optional<double> eq) {
  for (const auto& p : curve_tabulate(model, grid, tol)) {
    csv.cell(line).cell(extra1);
    eq ? csv.cell(*eq) : csv.empty();
    csv.cell(p.x.value()).cell(p.f_x);
    csv.end_row();
  }
}

OutputFile fig1a(const Config& c) {
  // Constant influence lambda0 on a Beta(3,1) population: lines through (mu, mu).
  CsvWriter csv("figures", c, {"line", "mean_lambda", "equilibrium", "x", "f_x"});
  const auto grid = uniform_grid(c.figures.grid_points);
  const auto latent = LatentDistribution::beta(3.0, 1.0);
  for (int i = 0; i <= 10; ++i) {
    const double lambda0 = i / 10.0;
    const RatingModel model(latent, InfluenceKernel::constant(UnitValue(lambda0)));
    std::optional<double> eq;
    if (i < 10) eq = closed_form_equilibrium(model);
    add_curve_rows(csv, model, grid, kDefaultCurveTol, std::to_string(i), lambda0, eq);
  }
  return std::move(csv).finish("fig1a.csv");
}

OutputFile fig1b(const Config& c) {
  const auto& f = c.figures;
  RandomSource m_rng(derive_seed(c.seed, seed_tag::figure, 1), 0);
  std::vector<double> ms;
  while (ms.size() < f.fig1b_lines) {
    const double m = m_rng.normal(0.7, 0.2);
    if (m >= 0.0 && m <= 1.0) ms.push_back(m);
  }

  const auto latent = LatentDistribution::beta(3.0, 1.0);
  const std::uint64_t pop_seed = derive_seed(c.seed, seed_tag::figure, 2);
  RandomSource r_rng(pop_seed, 0);
  std::vector<double> rs(f.fig1b_agents);
  for (auto& r : rs) r = sample_latent(latent, r_rng);

  struct Line {
    double m, mean_lambda, intercept, equilibrium;
  };
  std::vector<Line> lines;
  for (std::size_t l = 0; l < ms.size(); ++l) {
    const auto kernel = InfluenceKernel::latent_only(UnitValue(ms[l]), 3.0);
    RandomSource lam_rng(derive_seed(pop_seed, seed_tag::lambda, l), 0);
    double sum_lambda = 0.0;
    double sum_intercept = 0.0;
    for (double r : rs) {
      const double lambda = sample_lambda(kernel, UnitValue(r), UnitValue(0.5), lam_rng);
      sum_lambda += lambda;
      sum_intercept += (1.0 - lambda) * r;
    }
    const double n = static_cast<double>(rs.size());
    const double slope = sum_lambda / n;
    const double intercept = sum_intercept / n;
    if (!(slope < 1.0)) throw NumericalError("fig1b: estimated mean influence is 1");
    lines.push_back({ms[l], slope, intercept, intercept / (1.0 - slope)});
  }
  const auto [lo, hi] = std::minmax_element(lines.begin(), lines.end(),
                                            [](const Line& a, const Line& b) { return a.equilibrium < b.equilibrium; });
  const double band_lo = lo->equilibrium;
  const double band_hi = hi->equilibrium;

  CsvWriter csv("figures", c,
                {"line", "m", "mean_lambda", "intercept", "equilibrium", "band_lo", "band_hi", "x", "f_x"});
  const auto grid = uniform_grid(f.grid_points);
  for (std::size_t l = 0; l < lines.size(); ++l) {
    const auto& ln = lines[l];
    for (double x : grid) {
      csv.cell(std::uint64_t{l}).cell(ln.m).cell(ln.mean_lambda).cell(ln.intercept).cell(ln.equilibrium);
      csv.cell(band_lo).cell(band_hi).cell(x).cell(ln.mean_lambda * x + ln.intercept);
      csv.end_row();
    }
  }
  return std::move(csv).finish("fig1b.csv");
}

OutputFile fig2left(const Config& c) {
  CsvWriter csv("figures", c, {"alpha", "kind", "x", "f_x", "abs_err", "stability"});
  const auto grid = uniform_grid(c.figures.grid_points);
  for (double alpha : {0.1, 0.3, 3.0}) {
    const auto model = figure_model(alpha, alpha);
    for (const auto& p : curve_tabulate(model, grid, kDefaultCurveTol)) {
      csv.cell(alpha).cell("curve").cell(p.x.value()).cell(p.f_x).cell(p.abs_err).empty();
      csv.end_row();
    }
    for (const auto& e : find_equilibria(model)) {
      csv.cell(alpha).cell("equilibrium").cell(e.x_star).cell(e.x_star).cell(e.residual);
      csv.cell(to_string(e.stability));
      csv.end_row();
    }
  }
  return std::move(csv).finish("fig2left.csv");
}

OutputFile fig2right(const Config& c) {
  const auto& f = c.figures;
  const auto model = figure_model(0.3, 0.3);
  const auto eqs = find_equilibria(model);

  ReplicationPlan plan;
  plan.n_agents = f.fig2_agents;
  plan.n_reps = f.fig2_reps;
  plan.base_seed = derive_seed(c.seed, seed_tag::figure, 3);
  plan.fixed_population = true;
  plan.keep_paths = true;
  const auto result = run_replications(model, plan, stable_points(eqs));

  CsvWriter csv("figures", c, {"kind", "replication", "step", "value"});
  for (const auto& e : eqs) {
    if (e.stability == Stability::degenerate) continue;
    csv.cell(e.stability == Stability::stable ? "stable_equilibrium" : "unstable_equilibrium");
    csv.empty().empty().cell(e.x_star);
    csv.end_row();
  }
  for (const auto& t : result.trajectories) {
    const std::size_t n = t.running_means.size();
    for (std::size_t k = 1; k <= n; ++k) {
      if (!keep_step(k, n, f.trajectory_stride)) continue;
      csv.cell("trajectory").cell(std::uint64_t{t.replication_id}).cell(std::uint64_t{k});
      csv.cell(t.running_means[k - 1]);
      csv.end_row();
    }
  }
  return std::move(csv).finish("fig2right.csv");
}

void bifurcation_rows(CsvWriter& csv, const BifurcationResult& r) {
  for (const auto& row : r.rows) {
    for (const auto& e : row.equilibria) {
      csv.cell(row.param).cell(e.x_star).cell(to_string(e.stability));
      csv.end_row();
    }
  }
}

void log_failures(std::ostream& log, const BifurcationResult& r, std::size_t total) {
  for (const auto& f : r.failures) warn(log, "param " + format_double(f.param) + " failed: " + f.message);
  if (total > 0 && r.failures.size() == total) throw NumericalError("every parameter value failed");
}

OutputFile fig3(const Config& c, std::ostream& log) {
  const auto& f = c.figures;
  SweepValues sweep;
  sweep.start = f.fig3_min;
  sweep.stop = f.fig3_max;
  sweep.count = f.fig3_count;
  sweep.log_spacing = true;
  const auto params = sweep.values();
  const ModelFamily family = [](double a) { return figure_model(a, a / 0.7 - a); };
  const auto result = bifurcation_sweep(family, params);
  log_failures(log, result, params.size());
  CsvWriter csv("figures", c, {"param", "x_star", "stability"});
  bifurcation_rows(csv, result);
  return std::move(csv).finish("fig3.csv");
}

}  // namespace

std::vector<OutputFile> cmd_curve(const Config& c, std::ostream&) {
  const auto model = c.model();
  const auto grid = c.curve.grid.nodes();
  CsvWriter csv("curve", c, {"x", "f_x", "abs_err", "method"});
  for (const auto& p : curve_tabulate(model, grid, c.curve.tol)) {
    csv.cell(p.x.value()).cell(p.f_x).cell(p.abs_err).cell(to_string(p.method));
    csv.end_row();
  }
  std::vector<OutputFile> out;
  out.push_back(std::move(csv).finish("curve.csv"));
  return out;
}

std::vector<OutputFile> cmd_equilibria(const Config& c, std::ostream&) {
  const auto model = c.model();
  CsvWriter csv("equilibria", c, {"x_star", "stability", "residual", "slope_estimate"});
  for (const auto& e : find_equilibria(model, c.equilibria.options())) {
    csv.cell(e.x_star).cell(to_string(e.stability)).cell(e.residual).cell(e.slope_estimate);
    csv.end_row();
  }
  std::vector<OutputFile> out;
  out.push_back(std::move(csv).finish("equilibria.csv"));
  return out;
}

std::vector<OutputFile> cmd_bifurcate(const Config& c, std::ostream& log) {
  const auto family = make_family(c);
  const auto params = c.bifurcate.values.values();
  // Fail on a bad first member before the sweep swallows it as a row failure.
  try {
    family(params.front());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("bifurcate: ") + e.what());
  }
  const auto result = bifurcation_sweep(family, params, c.bifurcate.roots.options());
  log_failures(log, result, params.size());

  CsvWriter rows("bifurcate", c, {"param", "x_star", "stability"});
  bifurcation_rows(rows, result);
  CsvWriter trans("bifurcate", c, {"param_lo", "param_hi", "stable_before", "stable_after"});
  for (const auto& t : result.transitions) {
    trans.cell(t.param_lo).cell(t.param_hi).cell(std::uint64_t{t.stable_lo}).cell(std::uint64_t{t.stable_hi});
    trans.end_row();
  }
  std::vector<OutputFile> out;
  out.push_back(std::move(rows).finish("bifurcation.csv"));
  out.push_back(std::move(trans).finish("transitions.csv"));
  return out;
}

std::vector<OutputFile> cmd_simulate(const Config& c, std::ostream& log) {
  const auto model = c.model();
  const auto& s = c.simulate;
  std::vector<double> stable;
  try {
    stable = stable_points(find_equilibria(model, c.equilibria.options()));
  } catch (const NumericalError& e) {
    warn(log, std::string("no equilibria for distances: ") + e.what());
  }

  ReplicationPlan plan;
  plan.n_agents = s.agents;
  plan.n_reps = s.reps;
  plan.base_seed = c.seed;
  plan.fixed_population = s.fixed_population;
  plan.keep_paths = s.trajectory_stride > 0;
  const auto result = run_replications(model, plan, stable);

  CsvWriter summary("simulate", c,
                    {"replication", "final_mean", "nearest_equilibrium", "distance", "population_seed",
                     "permutation_seed", "lambda_seed"});
  for (const auto& r : result.summaries) {
    summary.cell(std::uint64_t{r.replication_id}).cell(r.final_mean);
    r.nearest_equilibrium ? summary.cell(*r.nearest_equilibrium) : summary.empty();
    r.distance ? summary.cell(*r.distance) : summary.empty();
    summary.cell(r.population_seed).cell(r.permutation_seed).cell(r.lambda_seed);
    summary.end_row();
  }
  std::vector<OutputFile> out;
  out.push_back(std::move(summary).finish("summary.csv"));

  if (plan.keep_paths) {
    CsvWriter traj("simulate", c, {"replication", "step", "running_mean"});
    for (const auto& t : result.trajectories) {
      const std::size_t n = t.running_means.size();
      for (std::size_t k = 1; k <= n; ++k) {
        if (!keep_step(k, n, s.trajectory_stride)) continue;
        traj.cell(std::uint64_t{t.replication_id}).cell(std::uint64_t{k}).cell(t.running_means[k - 1]);
        traj.end_row();
      }
    }
    out.push_back(std::move(traj).finish("trajectory.csv"));
  }
  return out;
}

std::vector<OutputFile> cmd_figures(const Config& c, std::ostream& log) {
  std::vector<OutputFile> out;
  out.push_back(fig1a(c));
  out.push_back(fig1b(c));
  out.push_back(fig2left(c));
  out.push_back(fig2right(c));
  out.push_back(fig3(c, log));
  return out;
}

void write_outputs(const std::string& dir, const std::vector<OutputFile>& files) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
  for (const auto& f : files) {
    const auto path = fs::path(dir) / f.name;
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    os << f.contents;
    os.close();
    if (!os) throw IoError("cannot write '" + path.string() + "'");
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Social-influence rating dynamics: influence curves, equilibria, simulation"};
  app.name("ratingdyn");
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::string grid;
  std::size_t reps = 0;
  std::size_t agents = 0;

  struct Command {
    const char* name;
    const char* help;
    std::vector<OutputFile> (*fn)(const Config&, std::ostream&);
  };
  const Command commands[] = {
      {"curve", "tabulate f(x) on a grid (curve.csv)", cmd_curve},
      {"equilibria", "find and classify fixed points (equilibria.csv)", cmd_equilibria},
      {"bifurcate", "sweep a model parameter (bifurcation.csv, transitions.csv)", cmd_bifurcate},
      {"simulate", "replicate the sequential process (summary.csv, trajectory.csv)", cmd_simulate},
      {"figures", "datasets for the five figure panels", cmd_figures},
  };
  struct Flags {
    CLI::Option *seed, *out_dir, *grid, *reps, *agents;
  };
  std::vector<std::pair<CLI::App*, Flags>> subs;
  for (const auto& cmd : commands) {
    auto* sub = app.add_subcommand(cmd.name, cmd.help);
    auto* cfg = sub->add_option("-c,--config", config_path, "JSON config file");
    if (std::string_view(cmd.name) != "figures") cfg->required();
    Flags fl{sub->add_option("--seed", seed, "base seed"),
             sub->add_option("--out-dir", out_dir, "output directory"),
             sub->add_option("--grid", grid, "grid as start:stop:step or a node count"),
             sub->add_option("--reps", reps, "replications"),
             sub->add_option("--agents", agents, "agents per replication")};
    subs.emplace_back(sub, fl);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    std::size_t which = 0;
    while (!subs[which].first->parsed()) ++which;
    const Flags& fl = subs[which].second;
    Overrides o;
    if (fl.seed->count()) o.seed = seed;
    if (fl.out_dir->count()) o.out_dir = out_dir;
    if (fl.grid->count()) o.grid = grid;
    if (fl.reps->count()) o.reps = reps;
    if (fl.agents->count()) o.agents = agents;

    Config config = config_path.empty() ? parse_config(json::object()) : load_config(config_path);
    apply_overrides(config, o);
    const auto files = commands[which].fn(config, err);
    write_outputs(config.out_dir, files);
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "ratingdyn: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    // DomainError and ModelKindError
    err << "ratingdyn: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const json::exception& e) {
    err << "ratingdyn: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    err << "ratingdyn: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const IoError& e) {
    err << "ratingdyn: " << e.what() << '\n';
    return kExitIo;
  }
}

}  // namespace ratingdyn::cli
