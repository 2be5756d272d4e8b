#include "cubiclab_cli/config.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <concepts>
#include <type_traits>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "cubiclab/errors.hpp"

namespace cubiclab::cli {
namespace {

namespace pt = boost::property_tree;

constexpr std::pair<ExperimentKind, std::string_view> kExperimentNames[] = {
    {ExperimentKind::linear_decay, "linear_decay"},
    {ExperimentKind::bilinear_probe, "bilinear_probe"},
    {ExperimentKind::evolve, "evolve"},
    {ExperimentKind::wave_packet, "wave_packet"},
    {ExperimentKind::blowup, "blowup"},
    {ExperimentKind::modified_scattering, "modified_scattering"},
    {ExperimentKind::soliton, "soliton"},
    {ExperimentKind::morawetz, "morawetz"},
    {ExperimentKind::envelope, "envelope"},
};

/// Experiment-specific keys accepted for each experiment.
std::vector<std::string_view> experiment_keys(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::linear_decay:
      return {"t_min", "t_max", "samples"};
    case ExperimentKind::bilinear_probe:
      return {"j", "k_list", "separation", "sigma_xi"};
    case ExperimentKind::evolve:
      return {};
    case ExperimentKind::wave_packet:
    case ExperimentKind::blowup:
      return {"xi0", "packet_scale", "x0", "epsilon"};
    case ExperimentKind::modified_scattering:
      return {"t_lo", "t_hi", "velocities"};
    case ExperimentKind::soliton:
      return {"omega", "tol", "max_iter", "evolve_profile", "xi0", "packet_scale", "x0"};
    case ExperimentKind::morawetz:
      return {"lp_scheme", "lp_delta", "lp_unit", "region_k", "region_j"};
    case ExperimentKind::envelope:
      return {"lp_scheme", "lp_delta", "lp_unit", "epsilon", "c_target"};
  }
  return {};
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Text conversions shared by the reader and the writer.
std::string to_text(double v) { return fmt_double(v); }
template <std::integral T>
std::string to_text(T v) {
  if constexpr (std::is_same_v<T, bool>) {
    return v ? "true" : "false";
  } else {
    return std::to_string(v);
  }
}
std::string to_text(const std::string& v) { return v; }
std::string to_text(ExperimentKind v) { return std::string(to_string(v)); }
std::string to_text(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

template <class T>
bool parse_number(const std::string& s, T& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

bool from_text(const std::string& s, double& out) { return parse_number(s, out) && std::isfinite(out); }
template <std::integral T>
  requires(!std::is_same_v<T, bool>)
bool from_text(const std::string& s, T& out) {
  return parse_number(s, out);
}
bool from_text(const std::string& s, bool& out) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") {
    out = true;
    return true;
  }
  if (s == "false" || s == "0" || s == "no" || s == "off") {
    out = false;
    return true;
  }
  return false;
}
bool from_text(const std::string& s, std::string& out) {
  out = s;
  return true;
}
bool from_text(const std::string& s, ExperimentKind& out) {
  const auto k = experiment_from_string(s);
  if (k) out = *k;
  return k.has_value();
}
bool from_text(const std::string& s, std::vector<int>& out) {
  std::vector<int> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    int x = 0;
    if (!from_text(trim(item), x)) return false;
    v.push_back(x);
  }
  out = std::move(v);
  return true;
}

const char* type_name(const double&) { return "a number"; }
const char* type_name(const bool&) { return "a boolean"; }
const char* type_name(const std::string&) { return "a string"; }
const char* type_name(const std::vector<int>&) { return "a comma-separated integer list"; }
template <std::integral T>
const char* type_name(const T&) {
  return std::is_signed_v<T> ? "an integer" : "a nonnegative integer";
}

/// Calls v(section, key, field) for every field that belongs to the config's
/// experiment. The top-level experiment key is handled by the caller.
template <class C, class V>
void visit_fields(C& c, V&& v) {
  v("", "seed", c.seed);
  v("", "output_dir", c.output_dir);
  v("grid", "n_points", c.grid.n_points);
  v("grid", "length", c.grid.length);
  v("dispersion", "name", c.dispersion.name);
  v("dispersion", "beta", c.dispersion.beta);
  v("nonlinearity", "name", c.nonlinearity.name);
  v("nonlinearity", "gamma_re", c.nonlinearity.gamma_re);
  v("nonlinearity", "gamma_im", c.nonlinearity.gamma_im);
  v("nonlinearity", "sigma", c.nonlinearity.sigma);
  v("solver", "dt", c.solver.dt);
  v("solver", "t_end", c.solver.t_end);
  v("solver", "dealias", c.solver.dealias);
  v("solver", "output_stride", c.solver.output_stride);
  v("solver", "scheme", c.solver.scheme);
  v("solver", "store_snapshots", c.solver.store_snapshots);
  v("initial", "profile", c.initial.profile);
  v("initial", "amplitude", c.initial.amplitude);
  v("initial", "width", c.initial.width);
  v("initial", "center", c.initial.center);
  v("initial", "carrier", c.initial.carrier);
  v("initial", "noise", c.initial.noise);

  auto& o = c.options;
  for (auto key : experiment_keys(c.experiment)) {
    if (key == "t_min") v("options", key, o.t_min);
    else if (key == "t_max") v("options", key, o.t_max);
    else if (key == "samples") v("options", key, o.samples);
    else if (key == "j") v("options", key, o.j);
    else if (key == "k_list") v("options", key, o.k_list);
    else if (key == "separation") v("options", key, o.separation);
    else if (key == "sigma_xi") v("options", key, o.sigma_xi);
    else if (key == "xi0") v("options", key, o.xi0);
    else if (key == "packet_scale") v("options", key, o.packet_scale);
    else if (key == "x0") v("options", key, o.x0);
    else if (key == "epsilon") v("options", key, o.epsilon);
    else if (key == "t_lo") v("options", key, o.t_lo);
    else if (key == "t_hi") v("options", key, o.t_hi);
    else if (key == "velocities") v("options", key, o.velocities);
    else if (key == "omega") v("options", key, o.omega);
    else if (key == "tol") v("options", key, o.tol);
    else if (key == "max_iter") v("options", key, o.max_iter);
    else if (key == "evolve_profile") v("options", key, o.evolve_profile);
    else if (key == "lp_scheme") v("options", key, o.lp_scheme);
    else if (key == "lp_delta") v("options", key, o.lp_delta);
    else if (key == "lp_unit") v("options", key, o.lp_unit);
    else if (key == "region_k") v("options", key, o.region_k);
    else if (key == "region_j") v("options", key, o.region_j);
    else if (key == "c_target") v("options", key, o.c_target);
  }
}

std::string dotted(std::string_view section, std::string_view key) {
  return section.empty() ? std::string(key) : std::string(section) + "." + std::string(key);
}

SymbolParams symbol_params(const RunConfig& c) {
  SymbolParams p;
  p.beta = c.dispersion.beta;
  p.gamma = Complex{c.nonlinearity.gamma_re, c.nonlinearity.gamma_im};
  p.sigma = c.nonlinearity.sigma;
  return p;
}

}  // namespace

std::string_view to_string(ExperimentKind k) {
  for (const auto& [kind, name] : kExperimentNames) {
    if (kind == k) return name;
  }
  return "unknown";
}

std::optional<ExperimentKind> experiment_from_string(std::string_view s) {
  for (const auto& [kind, name] : kExperimentNames) {
    if (name == s) return kind;
  }
  return std::nullopt;
}

std::vector<std::string_view> experiment_names() {
  std::vector<std::string_view> out;
  for (const auto& e : kExperimentNames) out.push_back(e.second);
  return out;
}

ParseResult parse_config(std::string_view text) {
  ParseResult result;
  pt::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    result.errors.push_back("syntax error at line " + std::to_string(e.line()) + ": " + e.message());
    return result;
  }

  RunConfig cfg;
  std::set<std::string> used;
  auto& errors = result.errors;

  const auto experiment = tree.get_optional<std::string>("experiment");
  used.insert("experiment");
  if (!experiment) {
    errors.push_back("experiment: missing (one of linear_decay, bilinear_probe, evolve, wave_packet, blowup, "
                     "modified_scattering, soliton, morawetz, envelope)");
  } else if (!from_text(trim(*experiment), cfg.experiment)) {
    errors.push_back("experiment: unknown experiment '" + trim(*experiment) + "'");
  }

  visit_fields(cfg, [&](std::string_view section, std::string_view key, auto& field) {
    const std::string path = dotted(section, key);
    used.insert(path);
    const auto raw = tree.get_optional<std::string>(pt::ptree::path_type(path, '.'));
    if (!raw) return;
    if (!from_text(trim(*raw), field)) {
      errors.push_back(path + ": expected " + type_name(field) + ", got '" + trim(*raw) + "'");
    }
  });

  // Anything left over is a typo or a key that does not apply to this experiment.
  for (const auto& [name, child] : tree) {
    if (child.empty()) {
      if (!used.count(name)) errors.push_back(name + ": unknown key");
      continue;
    }
    for (const auto& [key, leaf] : child) {
      const std::string path = name + "." + key;
      if (!leaf.empty() || !used.count(path)) {
        errors.push_back(path + ": unknown key" +
                         (name == "options" && experiment
                              ? std::string(" for experiment '") + trim(*experiment) + "'"
                              : std::string()));
      }
    }
  }

  if (errors.empty()) {
    auto semantic = validate(cfg);
    errors.insert(errors.end(), semantic.begin(), semantic.end());
  }
  if (errors.empty()) result.config = std::move(cfg);
  return result;
}

ParseResult parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    ParseResult r;
    r.errors.push_back(path + ": cannot open file");
    return r;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize(const RunConfig& c) {
  std::string out = "experiment = " + to_text(c.experiment) + "\n";
  std::string current;
  visit_fields(c, [&](std::string_view section, std::string_view key, const auto& field) {
    if (section != current) {
      out += "\n[" + std::string(section) + "]\n";
      current = std::string(section);
    }
    out += std::string(key) + " = " + to_text(field) + "\n";
  });
  return out;
}

std::vector<std::string> validate(const RunConfig& c) {
  std::vector<std::string> e;
  auto check = [&](bool ok, std::string msg) {
    if (!ok) e.push_back(std::move(msg));
  };
  check(c.grid.n_points >= 16 && std::has_single_bit(c.grid.n_points) && c.grid.n_points <= (1u << 22),
        "grid.n_points: must be a power of two in [16, 4194304]");
  check(c.grid.length > 0.0, "grid.length: must be positive");

  const auto params = symbol_params(c);
  check(make_dispersion(c.dispersion.name, params).has_value(),
        "dispersion.name: unknown dispersion '" + c.dispersion.name + "'");
  check(c.dispersion.beta >= 0.0, "dispersion.beta: must be nonnegative");
  check(make_nonlinearity(c.nonlinearity.name, params).has_value(),
        "nonlinearity.name: unknown nonlinearity '" + c.nonlinearity.name + "'");
  check(c.nonlinearity.sigma >= 0.0, "nonlinearity.sigma: must be nonnegative");

  check(c.solver.dt > 0.0, "solver.dt: must be positive");
  check(c.solver.t_end > 0.0, "solver.t_end: must be positive");
  check(!(c.solver.dt > 0.0 && c.solver.t_end > 0.0) || c.solver.t_end >= c.solver.dt,
        "solver.t_end: must be at least dt");
  check(c.solver.output_stride >= 1, "solver.output_stride: must be >= 1");
  check(c.solver.dealias == "pad2x" || c.solver.dealias == "none", "solver.dealias: must be pad2x or none");
  check(c.solver.scheme == "ifrk4" || c.solver.scheme == "strang", "solver.scheme: must be ifrk4 or strang");

  check(c.initial.profile == "gaussian" || c.initial.profile == "sech" || c.initial.profile == "zero",
        "initial.profile: must be gaussian, sech or zero");
  check(c.initial.width > 0.0, "initial.width: must be positive");
  check(c.initial.noise >= 0.0, "initial.noise: must be nonnegative");

  const auto& o = c.options;
  switch (c.experiment) {
    case ExperimentKind::linear_decay:
      check(o.t_min > 0.0, "options.t_min: must be positive");
      check(o.t_max > o.t_min, "options.t_max: must exceed t_min");
      check(o.samples >= 2, "options.samples: must be >= 2");
      break;
    case ExperimentKind::bilinear_probe:
      check(o.j >= 0, "options.j: must be nonnegative");
      check(!o.k_list.empty(), "options.k_list: must not be empty");
      for (int k : o.k_list) {
        check(k >= 0 && std::abs(k - o.j) > 2,
              "options.k_list: region " + std::to_string(k) + " must be nonnegative and differ from j by > 2");
      }
      check(o.separation > 0.0, "options.separation: must be positive");
      check(o.sigma_xi > 0.0, "options.sigma_xi: must be positive");
      break;
    case ExperimentKind::wave_packet:
    case ExperimentKind::blowup:
      check(o.packet_scale > 0.0 && o.packet_scale <= 1.0, "options.packet_scale: must lie in (0, 1]");
      check(o.epsilon > 0.0, "options.epsilon: must be positive");
      break;
    case ExperimentKind::modified_scattering:
      check(o.t_lo > 0.0, "options.t_lo: must be positive");
      check(o.t_hi >= std::exp(2.0) * o.t_lo, "options.t_hi: must be at least e^2 * t_lo");
      check(o.velocities >= 1, "options.velocities: must be >= 1");
      break;
    case ExperimentKind::soliton:
      check(o.omega > 0.0, "options.omega: must be positive");
      check(o.tol > 0.0, "options.tol: must be positive");
      check(o.max_iter >= 1, "options.max_iter: must be >= 1");
      check(o.packet_scale > 0.0, "options.packet_scale: must be positive");
      break;
    case ExperimentKind::morawetz:
    case ExperimentKind::envelope:
      check(o.lp_scheme == "dyadic" || o.lp_scheme == "lattice" ||
                (c.experiment == ExperimentKind::morawetz && o.lp_scheme == "none"),
            "options.lp_scheme: must be dyadic or lattice" +
                std::string(c.experiment == ExperimentKind::morawetz ? " or none" : ""));
      check(o.lp_delta > 0.0, "options.lp_delta: must be positive");
      check(o.lp_unit > 0.0, "options.lp_unit: must be positive");
      if (c.experiment == ExperimentKind::envelope) {
        check(o.epsilon > 0.0, "options.epsilon: must be positive");
        check(o.c_target > 0.0, "options.c_target: must be positive");
      }
      break;
    case ExperimentKind::evolve:
      break;
  }
  return e;
}

std::uint64_t config_hash(const RunConfig& c) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : serialize(c)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

GridSpec build_grid(const RunConfig& c) { return GridSpec(c.grid.n_points, c.grid.length); }

DispersionSpec build_dispersion(const RunConfig& c) {
  auto d = make_dispersion(c.dispersion.name, symbol_params(c));
  if (!d) throw ConfigError("unknown dispersion '" + c.dispersion.name + "'");
  return *d;
}

TrilinearSpec build_nonlinearity(const RunConfig& c) {
  auto n = make_nonlinearity(c.nonlinearity.name, symbol_params(c));
  if (!n) throw ConfigError("unknown nonlinearity '" + c.nonlinearity.name + "'");
  return *n;
}

SolverConfig build_solver(const RunConfig& c) {
  SolverConfig s;
  s.dt = c.solver.dt;
  s.t_end = c.solver.t_end;
  s.dealias = c.solver.dealias == "none" ? Dealias::none : Dealias::pad2x;
  s.output_stride = c.solver.output_stride;
  s.scheme = c.solver.scheme == "strang" ? Scheme::strang : Scheme::ifrk4;
  s.store_snapshots = c.solver.store_snapshots;
  return s;
}

ComplexField build_initial(const RunConfig& c) {
  const auto grid = build_grid(c);
  ComplexField u(grid);
  const auto& in = c.initial;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.x(i);
    const double y = (x - in.center) / in.width;
    double profile = 0.0;
    if (in.profile == "gaussian") profile = std::exp(-0.5 * y * y);
    else if (in.profile == "sech") profile = 1.0 / std::cosh(y);
    u.values[i] = in.amplitude * profile * std::polar(1.0, in.carrier * x);
  }
  if (in.noise > 0.0) {
    std::mt19937_64 rng(c.seed);
    std::normal_distribution<double> normal(0.0, in.noise);
    for (auto& v : u.values) v += Complex{normal(rng), normal(rng)};
  }
  return u;
}

std::optional<LPScheme> build_lp_scheme(const RunConfig& c) {
  const auto& o = c.options;
  if (o.lp_scheme == "none") return std::nullopt;
  LPScheme s;
  s.kind = o.lp_scheme == "lattice" ? LPKind::lattice : LPKind::dyadic;
  s.delta = o.lp_delta;
  s.unit = o.lp_unit;
  return s;
}

}  // namespace cubiclab::cli
