#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cubiclab/evolve.hpp"
#include "cubiclab/grid.hpp"
#include "cubiclab/littlewood_paley.hpp"
#include "cubiclab/symbols.hpp"

namespace cubiclab::cli {

enum class ExperimentKind {
  linear_decay,
  bilinear_probe,
  evolve,
  wave_packet,
  blowup,
  modified_scattering,
  soliton,
  morawetz,
  envelope,
};

std::string_view to_string(ExperimentKind k);
std::optional<ExperimentKind> experiment_from_string(std::string_view s);
std::vector<std::string_view> experiment_names();

struct GridConfig {
  std::size_t n_points = 1024;
  double length = 100.0;
  bool operator==(const GridConfig&) const = default;
};

struct DispersionConfig {
  std::string name = "schrodinger";
  double beta = 0.1;
  bool operator==(const DispersionConfig&) const = default;
};

struct NonlinearityConfig {
  std::string name = "const";
  double gamma_re = 1.0;
  double gamma_im = 0.0;
  double sigma = 0.5;
  bool operator==(const NonlinearityConfig&) const = default;
};

struct SolverSection {
  double dt = 1e-2;
  double t_end = 1.0;
  std::string dealias = "pad2x";
  std::size_t output_stride = 10;
  std::string scheme = "ifrk4";
  bool store_snapshots = true;
  bool operator==(const SolverSection&) const = default;
};

/// Initial data: profile(x) * amplitude * exp(i carrier x) plus optional
/// complex Gaussian noise of size `noise` drawn from the run seed.
struct InitialConfig {
  std::string profile = "gaussian";  // gaussian | sech | zero
  double amplitude = 0.1;
  double width = 1.0;
  double center = 0.0;
  double carrier = 0.0;
  double noise = 0.0;
  bool operator==(const InitialConfig&) const = default;
};

/// Union of the experiment-specific keys; only the ones relevant to the
/// selected experiment are read or written.
struct ExperimentOptions {
  // linear_decay
  double t_min = 10.0;
  double t_max = 100.0;
  std::size_t samples = 10;
  // bilinear_probe
  int j = 1;
  std::vector<int> k_list{4, 5, 6, 7};
  double separation = 60.0;  // horizon = 2 * separation / |v_k - v_j|
  double sigma_xi = 0.1;
  // wave_packet, blowup, soliton embedding
  double xi0 = 1.0;
  double packet_scale = 1.0 / 16.0;  // N
  double x0 = 0.0;
  double epsilon = 1.0;
  // modified_scattering
  double t_lo = 20.0;
  double t_hi = 200.0;
  std::size_t velocities = 21;
  // soliton
  double omega = 4.0;
  double tol = 1e-12;
  int max_iter = 500;
  bool evolve_profile = false;
  // morawetz, envelope
  std::string lp_scheme = "dyadic";  // none | dyadic | lattice
  double lp_delta = 0.5;
  double lp_unit = 1.0;
  int region_k = 0;
  int region_j = 0;
  double c_target = 2.0;
  bool operator==(const ExperimentOptions&) const = default;
};

struct RunConfig {
  ExperimentKind experiment = ExperimentKind::evolve;
  std::uint64_t seed = 0;
  std::string output_dir = "out";
  GridConfig grid;
  DispersionConfig dispersion;
  NonlinearityConfig nonlinearity;
  SolverSection solver;
  InitialConfig initial;
  ExperimentOptions options;
  bool operator==(const RunConfig&) const = default;
};

/// Either a fully validated config or every validation error found.
struct ParseResult {
  std::optional<RunConfig> config;
  std::vector<std::string> errors;
  bool ok() const { return config.has_value(); }
};

/// Parses the INI-style document (top-level keys, then [grid], [dispersion],
/// [nonlinearity], [solver], [initial], [options] sections).
ParseResult parse_config(std::string_view text);
ParseResult parse_config_file(const std::string& path);

/// Canonical text form; parse_config(serialize(c)) yields c.
std::string serialize(const RunConfig& c);

/// Runs the semantic checks on an already populated config.
std::vector<std::string> validate(const RunConfig& c);

/// FNV-1a hash of the canonical text.
std::uint64_t config_hash(const RunConfig& c);

// Builders for library objects. The config must be valid.
GridSpec build_grid(const RunConfig& c);
DispersionSpec build_dispersion(const RunConfig& c);
TrilinearSpec build_nonlinearity(const RunConfig& c);
SolverConfig build_solver(const RunConfig& c);
ComplexField build_initial(const RunConfig& c);
std::optional<LPScheme> build_lp_scheme(const RunConfig& c);

}  // namespace cubiclab::cli
