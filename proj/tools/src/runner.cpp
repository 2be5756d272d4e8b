#include "cubiclab_cli/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "cubiclab/diagnostics.hpp"
#include "cubiclab/errors.hpp"
#include "cubiclab/fit.hpp"
#include "cubiclab/linear.hpp"
#include "cubiclab/solitons.hpp"

namespace cubiclab::cli {
namespace {

using nlohmann::ordered_json;

std::string cell(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string cell(const std::optional<double>& v) { return v ? cell(*v) : std::string(); }

ordered_json number(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

ordered_json to_json(const FitReport& r) {
  ordered_json j;
  j["experiment"] = r.experiment;
  j["status"] = to_string(r.status);
  j["pass"] = r.pass;
  j["relative_error"] = number(r.relative_error);
  j["tolerance"] = number(r.tolerance);
  j["window"] = {number(r.t_lo), number(r.t_hi)};
  ordered_json fitted = ordered_json::object(), predicted = ordered_json::object();
  for (const auto& [k, v] : r.fitted) fitted[k] = number(v);
  for (const auto& [k, v] : r.predicted) predicted[k] = number(v);
  j["fitted"] = fitted;
  j["predicted"] = predicted;
  j["notes"] = r.notes;
  return j;
}

FitReport make_report(std::string name, double t_lo, double t_hi) {
  FitReport r;
  r.experiment = std::move(name);
  r.t_lo = t_lo;
  r.t_hi = t_hi;
  return r;
}

Outcome linear_decay(const RunConfig& cfg) {
  const auto u0 = build_initial(cfg);
  const auto d = build_dispersion(cfg);
  const auto& o = cfg.options;
  std::vector<double> times(o.samples);
  for (std::size_t i = 0; i < o.samples; ++i) {
    times[i] = o.t_min + (o.t_max - o.t_min) * static_cast<double>(i) / static_cast<double>(o.samples - 1);
  }
  const auto samples = decay_metric(u0, d, times);

  Outcome out;
  append_row(out.trace, u0, false);
  for (double t : times) append_row(out.trace, propagate_linear(u0, d, t), false);

  double lo = samples.front().value, hi = lo, mean = 0.0;
  for (const auto& s : samples) {
    lo = std::min(lo, s.value);
    hi = std::max(hi, s.value);
    mean += s.value;
  }
  mean /= static_cast<double>(samples.size());
  auto rep = make_report("linear_decay", o.t_min, o.t_max);
  rep.tolerance = 0.05;
  rep.fitted["normalized_sup_min"] = lo;
  rep.fitted["normalized_sup_max"] = hi;
  rep.fitted["relative_variation"] = mean > 0.0 ? (hi - lo) / mean : 0.0;
  rep.predicted["relative_variation_max"] = 0.05;
  rep.relative_error = rep.fitted["relative_variation"];
  rep.pass = rep.relative_error <= rep.tolerance;
  out.reports.push_back(rep);
  return out;
}

Outcome bilinear(const RunConfig& cfg) {
  const auto d = build_dispersion(cfg);
  const auto& o = cfg.options;
  BilinearProbeOptions popts;
  popts.sigma_xi = o.sigma_xi;
  std::vector<double> scales, values;
  auto rep = make_report("bilinear_probe", 0.0, 0.0);
  for (int k : o.k_list) {
    const double dv = std::abs(d.a1(dyadic_probe_frequency(k)) - d.a1(dyadic_probe_frequency(o.j)));
    const double horizon = 2.0 * o.separation / dv;
    const double value = bilinear_scaling_probe(d, o.j, k, horizon, popts);
    scales.push_back(std::ldexp(1.0, std::max(k, o.j)));
    values.push_back(value);
    rep.fitted["value_k" + std::to_string(k)] = value;
    rep.t_hi = std::max(rep.t_hi, horizon);
  }
  rep.predicted["slope"] = -0.5;
  rep.tolerance = 0.15;
  if (values.size() >= 2) {
    const auto line = fit_loglog(scales, values);
    rep.fitted["slope"] = line.slope;
    rep.relative_error = std::abs(line.slope + 0.5) / 0.5;
    rep.pass = rep.relative_error <= rep.tolerance;
  } else {
    rep.status = FitStatus::inconclusive;
    rep.notes.push_back("a slope needs at least two regions in k_list");
  }
  Outcome out;
  out.reports.push_back(rep);
  return out;
}

Outcome evolve_run(const RunConfig& cfg) {
  const auto u0 = build_initial(cfg);
  const auto d = build_dispersion(cfg);
  const auto c = build_nonlinearity(cfg);
  Outcome out;
  out.trace = run(u0, d, c, build_solver(cfg));
  out.blew_up = out.trace.blowup_time.has_value();
  const auto& rows = out.trace.rows;
  auto rep = make_report("evolve", rows.front().time, rows.back().time);
  const double m0 = rows.front().mass;
  double drift = 0.0, mdrift = 0.0;
  for (const auto& r : rows) {
    drift = std::max(drift, m0 > 0.0 ? std::abs(r.mass - m0) / m0 : std::abs(r.mass));
    mdrift = std::max(mdrift, std::abs(r.momentum - rows.front().momentum));
  }
  rep.fitted["mass_relative_drift"] = drift;
  rep.fitted["momentum_drift"] = mdrift;
  rep.fitted["final_linfty"] = rows.back().linfty;
  rep.fitted["l6"] = std::pow(rows.back().l6_accum, 1.0 / 6.0);
  rep.fitted["bilinear"] = std::sqrt(rows.back().bilinear_accum);
  if (out.blew_up) {
    rep.status = FitStatus::anomaly;
    rep.fitted["blowup_time"] = *out.trace.blowup_time;
    rep.notes.push_back("integration stopped at t = " + cell(*out.trace.blowup_time));
  }
  rep.pass = !out.blew_up;
  out.reports.push_back(rep);
  return out;
}

WavePacketSpec packet_spec(const RunConfig& cfg) {
  WavePacketSpec w;
  w.xi0 = cfg.options.xi0;
  w.N = cfg.options.packet_scale;
  w.x0 = cfg.options.x0;
  w.amplitude = cfg.options.epsilon;
  return w;
}

Outcome wave_packet(const RunConfig& cfg, bool blowup) {
  Outcome out;
  const auto grid = build_grid(cfg);
  const auto d = build_dispersion(cfg);
  const auto c = build_nonlinearity(cfg);
  const auto solver = build_solver(cfg);
  const auto w = packet_spec(cfg);
  out.reports.push_back(blowup ? blowup_time_experiment(grid, w, d, c, solver, &out.trace)
                               : wave_packet_experiment(grid, w, d, c, solver, &out.trace));
  if (!blowup) out.blew_up = out.trace.blowup_time.has_value();
  return out;
}

Outcome scattering(const RunConfig& cfg) {
  Outcome out;
  ScatteringOptions opts;
  opts.velocity_count = cfg.options.velocities;
  out.reports.push_back(modified_scattering_fit(build_initial(cfg), build_dispersion(cfg), build_nonlinearity(cfg),
                                                build_solver(cfg), cfg.options.t_lo, cfg.options.t_hi, opts,
                                                &out.trace));
  out.blew_up = out.trace.blowup_time.has_value();
  return out;
}

Outcome soliton(const RunConfig& cfg) {
  const auto grid = build_grid(cfg);
  const auto d = build_dispersion(cfg);
  const auto c = build_nonlinearity(cfg);
  const auto& o = cfg.options;
  // Soliton-side symbol has the opposite sign of the evolution symbol.
  SolitonProblem p{rescaled_dispersion(d, o.xi0, o.packet_scale), o.omega,
                   negated(rescaled_symbol(c, o.xi0, o.packet_scale)), grid};
  const auto sol = petviashvili_solve(p, gaussian_seed(grid), o.tol, o.max_iter);

  Outcome out;
  out.profiles.push_back(sol.profile);
  auto rep = make_report("soliton", 0.0, 0.0);
  rep.fitted["residual"] = sol.residual;
  rep.fitted["iterations"] = sol.iterations;
  rep.fitted["stabilizing_factor"] = sol.stabilizing_factor;
  rep.fitted["converged"] = sol.converged ? 1.0 : 0.0;
  rep.tolerance = 1e-8;
  bool pass = sol.converged;

  // Closed form is available for quadratic dispersion and a constant real symbol.
  const bool quadratic = d.name == "schrodinger";
  const Complex gamma = p.nonlinearity.is_constant() ? p.nonlinearity.constant_value() : Complex{0.0, 1.0};
  if (quadratic && gamma.imag() == 0.0 && gamma.real() > 0.0) {
    const auto exact = nls_ground_state(grid, o.omega, gamma.real());
    double dist = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) dist = std::max(dist, std::abs(sol.profile.values[i] - exact.values[i]));
    rep.fitted["sup_distance_exact"] = dist;
    rep.predicted["sup_distance_exact"] = 0.0;
    rep.relative_error = dist;
    pass = pass && dist < rep.tolerance;
  } else {
    rep.relative_error = sol.residual;
    rep.notes.push_back("no closed-form profile for this symbol pair; residual reported");
  }
  rep.pass = pass;

  if (o.evolve_profile) {
    const auto u0 = embed_soliton(sol.profile, o.xi0, o.packet_scale, o.x0, d, grid);
    out.trace = run(u0, d, c, build_solver(cfg));
    out.blew_up = out.trace.blowup_time.has_value();
    if (!out.blew_up && !out.trace.snapshots.empty()) {
      const auto& last = out.trace.snapshots.back();
      const double shift = d.a1(o.xi0) * (last.time - u0.time);
      ComplexField mod0(grid), mod1(grid);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        mod0.values[i] = std::abs(u0.values[i]);
        mod1.values[i] = std::abs(last.values[i]);
      }
      const auto moved = translate(mod0, shift);
      ComplexField diff(grid);
      for (std::size_t i = 0; i < grid.size(); ++i) diff.values[i] = mod1.values[i] - moved.values[i].real();
      rep.fitted["modulus_shape_l2_error"] = diff.l2_norm();
      rep.t_hi = last.time;
    }
  }
  out.reports.push_back(rep);
  return out;
}

Outcome morawetz(const RunConfig& cfg) {
  const auto u0 = build_initial(cfg);
  const auto d = build_dispersion(cfg);
  const auto c = build_nonlinearity(cfg);
  auto solver = build_solver(cfg);
  solver.store_snapshots = true;
  Outcome out;
  out.trace = run(u0, d, c, solver);
  out.blew_up = out.trace.blowup_time.has_value();

  MorawetzOptions mopts;
  mopts.scheme = build_lp_scheme(cfg);
  mopts.k = cfg.options.region_k;
  mopts.j = cfg.options.region_j;
  mopts.diagonal_c = c.diagonal(0.0).real();
  auto rep = make_report("morawetz", out.trace.times.front(), out.trace.times.back());
  if (out.trace.snapshots.size() < 3) {
    rep.status = FitStatus::inconclusive;
    rep.notes.push_back("fewer than three snapshots");
    out.reports.push_back(rep);
    return out;
  }
  for (std::size_t i = 0; i < out.trace.snapshots.size(); ++i) {
    const auto& s = out.trace.snapshots[i];
    const auto uk = mopts.scheme ? lp_project(s, *mopts.scheme, mopts.k) : s;
    const auto uj = mopts.scheme ? lp_project(s, *mopts.scheme, mopts.j) : s;
    out.trace.rows[i].morawetz_I = interaction_morawetz(uk, uj);
  }
  const auto samples = morawetz_rate(out.trace, mopts);
  double min_rate = samples.front().rate, max_rate = min_rate, max_res = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out.trace.rows[i + 1].morawetz_rate = samples[i].rate;
    min_rate = std::min(min_rate, samples[i].rate);
    max_rate = std::max(max_rate, samples[i].rate);
    max_res = std::max(max_res, std::abs(samples[i].residual));
  }
  rep.fitted["min_rate"] = min_rate;
  rep.fitted["max_rate"] = max_rate;
  rep.fitted["max_abs_residual"] = max_res;
  rep.predicted["min_rate_floor"] = -1e-3 * std::abs(max_rate);
  rep.tolerance = 1e-3;
  rep.relative_error = max_rate != 0.0 ? std::max(0.0, -min_rate / std::abs(max_rate)) : 0.0;
  rep.pass = rep.relative_error <= rep.tolerance;
  out.reports.push_back(rep);
  return out;
}

Outcome envelope(const RunConfig& cfg) {
  const auto u0 = build_initial(cfg);
  const auto scheme = build_lp_scheme(cfg).value_or(LPScheme{});
  const auto env = compute_envelope(u0, scheme, cfg.options.epsilon);
  const auto probe = envelope_probe(env);
  Outcome out;
  out.trace = run(u0, build_dispersion(cfg), build_nonlinearity(cfg), build_solver(cfg),
                  std::span<const Probe>(&probe, 1));
  out.blew_up = out.trace.blowup_time.has_value();
  if (out.trace.has_snapshots()) {
    out.reports.push_back(envelope_tracking_test(out.trace, scheme, cfg.options.epsilon, cfg.options.c_target));
  } else {
    auto rep = make_report("envelope_tracking", out.trace.times.front(), out.trace.times.back());
    double worst = 0.0;
    for (const auto& r : out.trace.rows) worst = std::max(worst, r.envelope_ratio.value_or(0.0));
    rep.fitted["max_ratio"] = worst;
    rep.fitted["effective_epsilon"] = env.epsilon;
    rep.predicted["c_target"] = cfg.options.c_target;
    rep.tolerance = cfg.options.c_target;
    rep.relative_error = worst;
    rep.pass = worst <= cfg.options.c_target;
    out.reports.push_back(rep);
  }
  return out;
}

bool write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) return false;
  f << content;
  return static_cast<bool>(f.flush());
}

}  // namespace

Outcome execute(const RunConfig& cfg) {
  switch (cfg.experiment) {
    case ExperimentKind::linear_decay:
      return linear_decay(cfg);
    case ExperimentKind::bilinear_probe:
      return bilinear(cfg);
    case ExperimentKind::evolve:
      return evolve_run(cfg);
    case ExperimentKind::wave_packet:
      return wave_packet(cfg, false);
    case ExperimentKind::blowup:
      return wave_packet(cfg, true);
    case ExperimentKind::modified_scattering:
      return scattering(cfg);
    case ExperimentKind::soliton:
      return soliton(cfg);
    case ExperimentKind::morawetz:
      return morawetz(cfg);
    case ExperimentKind::envelope:
      return envelope(cfg);
  }
  throw ConfigError("unknown experiment");
}

void write_trace_csv(std::ostream& os, const EvolutionTrace& trace) {
  os << "time,mass,momentum,l6_accum,linfty,envelope_ratio,morawetz_I,morawetz_rate,bilinear_accum\n";
  for (const auto& r : trace.rows) {
    os << cell(r.time) << ',' << cell(r.mass) << ',' << cell(r.momentum) << ',' << cell(r.l6_accum) << ','
       << cell(r.linfty) << ',' << cell(r.envelope_ratio) << ',' << cell(r.morawetz_I) << ','
       << cell(r.morawetz_rate) << ',' << cell(r.bilinear_accum) << '\n';
  }
}

std::string report_json(const RunConfig& cfg, const Outcome& outcome) {
  ordered_json j;
  j["experiment"] = std::string(to_string(cfg.experiment));
  bool pass = !outcome.reports.empty();
  for (const auto& r : outcome.reports) pass = pass && r.pass;
  j["pass"] = pass;
  j["blowup_time"] = outcome.trace.blowup_time ? number(*outcome.trace.blowup_time) : ordered_json(nullptr);
  ordered_json reports = ordered_json::array();
  for (const auto& r : outcome.reports) reports.push_back(to_json(r));
  j["reports"] = reports;
  return j.dump(2) + "\n";
}

int run_command(const RunConfig& cfg, const RunOptions& opts, std::ostream& log) {
  namespace fs = std::filesystem;
  const auto start = std::chrono::steady_clock::now();
  const fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    log << "error: cannot create output directory '" << cfg.output_dir << "'\n";
    return kExitIo;
  }

  Outcome outcome;
  int status = kExitOk;
  try {
    outcome = execute(cfg);
    if (outcome.blew_up) status = kExitBlowUp;
  } catch (const BlowUpError& e) {
    log << "error: " << e.what() << '\n';
    status = kExitBlowUp;
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  std::ostringstream csv;
  write_trace_csv(csv, outcome.trace);
  bool io_ok = write_file(dir / "trace.csv", csv.str());
  io_ok = io_ok && write_file(dir / "report.json", report_json(cfg, outcome));
  if (!outcome.profiles.empty()) {
    std::ostringstream prof;
    write_profile_csv(prof, outcome.profiles.front());
    io_ok = io_ok && write_file(dir / "profile.csv", prof.str());
  }

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  ordered_json manifest;
  char hash[20];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config_hash(cfg)));
  manifest["config_hash"] = hash;
  manifest["version"] = opts.version;
  manifest["experiment"] = std::string(to_string(cfg.experiment));
  manifest["seed"] = cfg.seed;
  manifest["wall_time_seconds"] = wall;
  manifest["exit_status"] = status;
  manifest["config"] = serialize(cfg);
  io_ok = io_ok && write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  if (!io_ok) {
    log << "error: failed to write outputs to '" << cfg.output_dir << "'\n";
    return kExitIo;
  }

  if (!opts.quiet) {
    for (const auto& r : outcome.reports) {
      log << to_string(cfg.experiment) << ": " << r.experiment << ' ' << (r.pass ? "PASS" : "FAIL") << " ("
          << to_string(r.status) << ", error " << cell(r.relative_error) << ", tolerance " << cell(r.tolerance)
          << ")\n";
    }
    log << "outputs written to " << cfg.output_dir << '\n';
  }
  return status;
}

}  // namespace cubiclab::cli
