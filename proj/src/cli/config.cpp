#include "ratingdyn/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "ratingdyn/errors.hpp"

namespace ratingdyn::cli {

using nlohmann::json;

namespace {

// Reads one JSON object, remembering which keys were used so that
// leftovers can be rejected.
class Block {
 public:
  Block(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
    const json* v = find(key, fallback.has_value());
    if (!v) return *fallback;
    if (!v->is_number()) throw ConfigError(field(key) + ": expected a number");
    const double d = v->get<double>();
    if (!std::isfinite(d)) throw ConfigError(field(key) + ": must be finite");
    return d;
  }

  std::uint64_t unsigned_int(const std::string& key, std::optional<std::uint64_t> fallback = std::nullopt) {
    const json* v = find(key, fallback.has_value());
    if (!v) return *fallback;
    if (!v->is_number_unsigned()) throw ConfigError(field(key) + ": expected a non-negative integer");
    return v->get<std::uint64_t>();
  }

  std::size_t count(const std::string& key, std::size_t fallback, std::size_t min_value) {
    const auto v = unsigned_int(key, fallback);
    if (v < min_value) {
      throw ConfigError(field(key) + ": must be at least " + std::to_string(min_value));
    }
    return static_cast<std::size_t>(v);
  }

  bool boolean(const std::string& key, bool fallback) {
    const json* v = find(key, true);
    if (!v) return fallback;
    if (!v->is_boolean()) throw ConfigError(field(key) + ": expected true or false");
    return v->get<bool>();
  }

  std::string string(const std::string& key, std::optional<std::string> fallback = std::nullopt) {
    const json* v = find(key, fallback.has_value());
    if (!v) return *fallback;
    if (!v->is_string()) throw ConfigError(field(key) + ": expected a string");
    return v->get<std::string>();
  }

  const json* raw(const std::string& key) { return find(key, true); }

  void finish() const {
    for (const auto& item : j_.items()) {
      if (!used_.count(item.key())) throw ConfigError(field(item.key()) + ": unknown key");
    }
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  const json* find(const std::string& key, bool optional) {
    used_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) {
      if (optional) return nullptr;
      throw ConfigError(field(key) + ": required");
    }
    return &*it;
  }

  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

// Re-raise domain violations from model constructors as config errors.
template <class F>
auto guarded(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const DomainError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

UnitValue unit(Block& b, const std::string& key) {
  const double v = b.number(key);
  if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(b.field(key) + ": must lie in [0,1]");
  return UnitValue(v);
}

double positive(Block& b, const std::string& key, std::optional<double> fallback = std::nullopt) {
  const double v = b.number(key, fallback);
  if (!(v > 0.0)) throw ConfigError(b.field(key) + ": must be positive");
  return v;
}

json canonical_latent(const LatentDistribution& d) {
  if (const auto* b = std::get_if<LatentDistribution::Beta>(&d.family())) {
    return {{"family", "beta"}, {"alpha", b->alpha}, {"beta", b->beta}};
  }
  if (const auto* p = std::get_if<LatentDistribution::PointMass>(&d.family())) {
    return {{"family", "point_mass"}, {"value", p->value.value()}};
  }
  const auto& disc = std::get<LatentDistribution::Discrete>(d.family());
  json atoms = json::array();
  for (const auto& a : disc.atoms) atoms.push_back({{"value", a.value.value()}, {"probability", a.probability}});
  return {{"family", "discrete"}, {"atoms", atoms}};
}

json canonical_kernel(const InfluenceKernel& k) {
  using K = InfluenceKernel;
  const auto& v = k.variant();
  if (const auto* c = std::get_if<K::Constant>(&v)) return {{"type", "constant"}, {"lambda0", c->lambda0.value()}};
  if (const auto* c = std::get_if<K::IndependentBeta>(&v)) return {{"type", "independent_beta"}, {"a", c->a}, {"b", c->b}};
  if (const auto* c = std::get_if<K::AffineLatent>(&v)) {
    return {{"type", "affine_latent"}, {"intercept", c->intercept}, {"slope", c->slope}};
  }
  if (const auto* c = std::get_if<K::LatentOnly>(&v)) {
    return {{"type", "latent_only"}, {"m", c->m.value()}, {"shape", c->shape}};
  }
  if (const auto* c = std::get_if<K::Distance>(&v)) return {{"type", "distance"}, {"shape", c->shape}};
  const auto& c = std::get<K::Proximity>(v);
  return {{"type", "proximity"}, {"lambda_max", c.lambda_max.value()}};
}

std::vector<double> split_numbers(const std::string& text, char sep) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, sep)) {
    std::size_t used = 0;
    double v;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != part.size()) throw ConfigError("not a number: '" + part + "'");
    out.push_back(v);
  }
  return out;
}

GridSpec range_grid(double start, double stop, double step, const std::string& path) {
  if (!(start >= 0.0 && stop <= 1.0 && start <= stop)) {
    throw ConfigError(path + ": range must satisfy 0 <= start <= stop <= 1");
  }
  if (!(step > 0.0)) throw ConfigError(path + ": step must be positive");
  return {std::nullopt, start, stop, step};
}

json grid_to_json(const GridSpec& g) {
  if (g.points) return {{"points", *g.points}};
  return {{"start", g.start}, {"stop", g.stop}, {"step", g.step}};
}

json roots_to_json(const EquilibriaBlock& e) {
  return {{"grid_size", e.grid_size}, {"root_tol", e.root_tol}, {"curve_tol", e.curve_tol}};
}

EquilibriaBlock parse_roots(Block& b) {
  EquilibriaBlock e;
  e.grid_size = b.count("grid_size", e.grid_size, 3);
  e.root_tol = positive(b, "root_tol", e.root_tol);
  e.curve_tol = positive(b, "curve_tol", e.curve_tol);
  return e;
}

}  // namespace

std::vector<double> GridSpec::nodes() const {
  if (points) return uniform_grid(*points);
  std::vector<double> out;
  const double span = stop - start;
  const auto n = static_cast<std::size_t>(std::floor(span / step + 1e-9));
  for (std::size_t i = 0; i <= n; ++i) out.push_back(std::min(stop, start + static_cast<double>(i) * step));
  if (stop - out.back() > 1e-9 * step) out.push_back(stop);
  return out;
}

GridSpec parse_grid(const json& j, const std::string& path) {
  if (j.is_number_unsigned()) {
    const auto n = j.get<std::uint64_t>();
    if (n < 2) throw ConfigError(path + ": need at least 2 grid points");
    return {static_cast<std::size_t>(n)};
  }
  if (j.is_string()) {
    const auto text = j.get<std::string>();
    try {
      if (text.find(':') == std::string::npos) {
        const auto v = split_numbers(text, ':');
        if (v.size() != 1 || v[0] < 2 || v[0] != std::floor(v[0])) throw ConfigError("bad count");
        return {static_cast<std::size_t>(v[0])};
      }
      const auto v = split_numbers(text, ':');
      if (v.size() != 3) throw ConfigError("expected start:stop:step");
      return range_grid(v[0], v[1], v[2], path);
    } catch (const ConfigError& e) {
      throw ConfigError(path + ": invalid grid '" + text + "' (" + e.what() + ")");
    }
  }
  Block b(j, path);
  GridSpec g;
  if (b.has("points")) {
    g = {b.count("points", 0, 2)};
  } else {
    g = range_grid(b.number("start"), b.number("stop"), b.number("step"), path);
  }
  b.finish();
  return g;
}

RootOptions EquilibriaBlock::options() const {
  RootOptions o;
  o.grid_size = grid_size;
  o.root_tol = root_tol;
  o.curve_tol = curve_tol;
  return o;
}

std::vector<double> SweepValues::values() const {
  if (!list.empty()) return list;
  std::vector<double> out(count);
  if (count == 1) return {start};
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    out[i] = log_spacing ? std::exp(std::log(start) + t * (std::log(stop) - std::log(start)))
                         : start + t * (stop - start);
  }
  out.front() = start;
  out.back() = stop;
  return out;
}

LatentDistribution parse_latent(const json& j, const std::string& path) {
  Block b(j, path);
  const auto family = b.string("family");
  std::optional<LatentDistribution> d;
  if (family == "beta") {
    const double a = positive(b, "alpha");
    const double be = positive(b, "beta");
    d = guarded(path, [&] { return LatentDistribution::beta(a, be); });
  } else if (family == "point_mass") {
    d = LatentDistribution::point_mass(unit(b, "value"));
  } else if (family == "discrete") {
    const json* atoms = b.raw("atoms");
    if (!atoms || !atoms->is_array()) throw ConfigError(b.field("atoms") + ": expected an array");
    std::vector<LatentDistribution::Atom> parsed;
    for (std::size_t i = 0; i < atoms->size(); ++i) {
      const auto& a = (*atoms)[i];
      const std::string apath = b.field("atoms") + "[" + std::to_string(i) + "]";
      if (a.is_array() && a.size() == 2 && a[0].is_number() && a[1].is_number()) {
        const double v = a[0].get<double>();
        if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(apath + ": value must lie in [0,1]");
        parsed.push_back({UnitValue(v), a[1].get<double>()});
      } else {
        Block ab(a, apath);
        parsed.push_back({unit(ab, "value"), ab.number("probability")});
        ab.finish();
      }
    }
    d = guarded(path, [&] { return LatentDistribution::discrete(std::move(parsed)); });
  } else {
    throw ConfigError(b.field("family") + ": unknown latent family '" + family +
                      "' (beta, point_mass, discrete)");
  }
  b.finish();
  return *d;
}

InfluenceKernel parse_kernel(const json& j, const std::string& path) {
  Block b(j, path);
  const auto type = b.string("type");
  std::optional<InfluenceKernel> k;
  if (type == "constant") {
    k = InfluenceKernel::constant(unit(b, "lambda0"));
  } else if (type == "independent_beta") {
    const double a = positive(b, "a");
    const double be = positive(b, "b");
    k = InfluenceKernel::independent_beta(a, be);
  } else if (type == "affine_latent") {
    const double i = b.number("intercept");
    const double s = b.number("slope");
    k = InfluenceKernel::affine_latent(i, s);
  } else if (type == "latent_only") {
    const auto m = unit(b, "m");
    k = InfluenceKernel::latent_only(m, positive(b, "shape", 3.0));
  } else if (type == "distance") {
    k = InfluenceKernel::distance(positive(b, "shape", 3.0));
  } else if (type == "proximity") {
    k = InfluenceKernel::proximity(unit(b, "lambda_max"));
  } else {
    throw ConfigError(b.field("type") + ": unknown kernel '" + type +
                      "' (constant, independent_beta, affine_latent, latent_only, distance, proximity)");
  }
  b.finish();
  return *k;
}

RatingModel Config::model() const {
  if (!latent) throw ConfigError("latent: required for this command");
  if (!kernel) throw ConfigError("kernel: required for this command");
  return RatingModel(*latent, *kernel);
}

Config parse_config(const json& j) {
  Block top(j, "");
  Config c;
  if (const json* l = top.raw("latent")) {
    c.latent = parse_latent(*l, "latent");
    c.latent_json = canonical_latent(*c.latent);
  }
  if (const json* k = top.raw("kernel")) {
    c.kernel = parse_kernel(*k, "kernel");
    c.kernel_json = canonical_kernel(*c.kernel);
  }
  c.seed = top.unsigned_int("seed", 0);
  c.out_dir = top.string("out_dir", ".");

  if (const json* v = top.raw("curve")) {
    Block b(*v, "curve");
    if (const json* g = b.raw("grid")) c.curve.grid = parse_grid(*g, "curve.grid");
    c.curve.tol = positive(b, "tol", c.curve.tol);
    b.finish();
  }
  if (const json* v = top.raw("equilibria")) {
    Block b(*v, "equilibria");
    c.equilibria = parse_roots(b);
    b.finish();
  }
  if (const json* v = top.raw("bifurcate")) {
    Block b(*v, "bifurcate");
    auto& bf = c.bifurcate;
    bf.parameter = b.string("parameter", bf.parameter);
    bf.tie = b.string("tie", bf.tie);
    bf.mean = b.number("mean", bf.mean);
    if (const json* vals = b.raw("values")) {
      if (vals->is_array()) {
        for (const auto& x : *vals) {
          if (!x.is_number()) throw ConfigError("bifurcate.values: expected numbers");
          bf.values.list.push_back(x.get<double>());
        }
        if (bf.values.list.empty()) throw ConfigError("bifurcate.values: empty list");
      } else {
        Block vb(*vals, "bifurcate.values");
        bf.values.start = vb.number("start");
        bf.values.stop = vb.number("stop");
        bf.values.count = vb.count("count", bf.values.count, 1);
        const auto spacing = vb.string("spacing", "log");
        if (spacing != "log" && spacing != "linear") {
          throw ConfigError("bifurcate.values.spacing: expected 'log' or 'linear'");
        }
        bf.values.log_spacing = spacing == "log";
        if (!(bf.values.stop >= bf.values.start)) throw ConfigError("bifurcate.values: stop < start");
        if (bf.values.log_spacing && !(bf.values.start > 0.0)) {
          throw ConfigError("bifurcate.values.start: log spacing needs a positive start");
        }
        vb.finish();
      }
    }
    bf.roots = parse_roots(b);
    b.finish();
  }
  {
    const auto& bf = c.bifurcate;
    if (bf.tie != "none" && bf.tie != "symmetric" && bf.tie != "mean") {
      throw ConfigError("bifurcate.tie: expected none, symmetric or mean");
    }
    if (bf.tie != "none" && bf.parameter != "latent.alpha") {
      throw ConfigError("bifurcate.tie: only applies to parameter latent.alpha");
    }
    if (bf.tie == "mean" && !(bf.mean > 0.0 && bf.mean < 1.0)) {
      throw ConfigError("bifurcate.mean: must lie in (0,1)");
    }
    if (bf.parameter.rfind("latent.", 0) != 0 && bf.parameter.rfind("kernel.", 0) != 0) {
      throw ConfigError("bifurcate.parameter: expected latent.<field> or kernel.<field>");
    }
  }
  if (const json* v = top.raw("simulate")) {
    Block b(*v, "simulate");
    auto& s = c.simulate;
    s.agents = b.count("agents", s.agents, 1);
    s.reps = b.count("reps", s.reps, 1);
    s.fixed_population = b.boolean("fixed_population", s.fixed_population);
    s.trajectory_stride = b.count("trajectory_stride", s.trajectory_stride, 0);
    b.finish();
  }
  if (const json* v = top.raw("figures")) {
    Block b(*v, "figures");
    auto& f = c.figures;
    f.grid_points = b.count("grid_points", f.grid_points, 2);
    f.fig1b_lines = b.count("fig1b_lines", f.fig1b_lines, 1);
    f.fig1b_agents = b.count("fig1b_agents", f.fig1b_agents, 1);
    f.fig2_agents = b.count("fig2_agents", f.fig2_agents, 1);
    f.fig2_reps = b.count("fig2_reps", f.fig2_reps, 1);
    f.fig3_count = b.count("fig3_count", f.fig3_count, 2);
    f.fig3_min = positive(b, "fig3_min", f.fig3_min);
    f.fig3_max = positive(b, "fig3_max", f.fig3_max);
    if (!(f.fig3_max > f.fig3_min)) throw ConfigError("figures.fig3_max: must exceed fig3_min");
    f.trajectory_stride = b.count("trajectory_stride", f.trajectory_stride, 1);
    b.finish();
  }
  top.finish();
  return c;
}

Config load_config(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot read config file '" + file + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + file + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

void apply_overrides(Config& c, const Overrides& o) {
  if (o.seed) c.seed = *o.seed;
  if (o.out_dir) c.out_dir = *o.out_dir;
  if (o.grid) {
    c.curve.grid = parse_grid(json(*o.grid), "--grid");
    if (c.curve.grid.points) {
      c.equilibria.grid_size = std::max<std::size_t>(3, *c.curve.grid.points);
      c.bifurcate.roots.grid_size = c.equilibria.grid_size;
      c.figures.grid_points = *c.curve.grid.points;
    }
  }
  if (o.reps) {
    if (*o.reps < 1) throw ConfigError("--reps: must be at least 1");
    c.simulate.reps = *o.reps;
    c.figures.fig2_reps = *o.reps;
  }
  if (o.agents) {
    if (*o.agents < 1) throw ConfigError("--agents: must be at least 1");
    c.simulate.agents = *o.agents;
    c.figures.fig2_agents = *o.agents;
  }
}

json to_json(const Config& c) {
  json j;
  if (c.latent_json) j["latent"] = *c.latent_json;
  if (c.kernel_json) j["kernel"] = *c.kernel_json;
  j["seed"] = c.seed;
  j["out_dir"] = c.out_dir;
  j["curve"] = {{"grid", grid_to_json(c.curve.grid)}, {"tol", c.curve.tol}};
  j["equilibria"] = roots_to_json(c.equilibria);
  {
    const auto& bf = c.bifurcate;
    json b = roots_to_json(bf.roots);
    b["parameter"] = bf.parameter;
    b["tie"] = bf.tie;
    b["mean"] = bf.mean;
    if (!bf.values.list.empty()) {
      b["values"] = bf.values.list;
    } else {
      b["values"] = {{"start", bf.values.start},
                     {"stop", bf.values.stop},
                     {"count", bf.values.count},
                     {"spacing", bf.values.log_spacing ? "log" : "linear"}};
    }
    j["bifurcate"] = b;
  }
  j["simulate"] = {{"agents", c.simulate.agents},
                   {"reps", c.simulate.reps},
                   {"fixed_population", c.simulate.fixed_population},
                   {"trajectory_stride", c.simulate.trajectory_stride}};
  const auto& f = c.figures;
  j["figures"] = {{"grid_points", f.grid_points},   {"fig1b_lines", f.fig1b_lines},
                  {"fig1b_agents", f.fig1b_agents}, {"fig2_agents", f.fig2_agents},
                  {"fig2_reps", f.fig2_reps},       {"fig3_count", f.fig3_count},
                  {"fig3_min", f.fig3_min},         {"fig3_max", f.fig3_max},
                  {"trajectory_stride", f.trajectory_stride}};
  return j;
}

ModelFamily make_family(const Config& c) {
  if (!c.latent_json || !c.kernel_json) throw ConfigError("bifurcate: latent and kernel blocks required");
  const auto& bf = c.bifurcate;
  const bool on_latent = bf.parameter.rfind("latent.", 0) == 0;
  const std::string field = bf.parameter.substr(7);
  const json& target = on_latent ? *c.latent_json : *c.kernel_json;
  if (field == "family" || field == "type" || !target.contains(field) || !target[field].is_number()) {
    throw ConfigError("bifurcate.parameter: '" + bf.parameter + "' is not a numeric field of the " +
                      (on_latent ? "latent" : "kernel") + " block");
  }
  return [latent = *c.latent_json, kernel = *c.kernel_json, on_latent, field, tie = bf.tie,
          mean = bf.mean](double p) {
    json l = latent;
    json k = kernel;
    if (on_latent) {
      l[field] = p;
      if (tie == "symmetric") l["beta"] = p;
      if (tie == "mean") l["beta"] = p / mean - p;
    } else {
      k[field] = p;
    }
    return RatingModel(parse_latent(l, "latent"), parse_kernel(k, "kernel"));
  };
}

}  // namespace ratingdyn::cli
