#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cubiclab_cli/config.hpp"
#include "cubiclab_cli/runner.hpp"
#include "json.hpp"

using namespace cubiclab;
using namespace cubiclab::cli;
namespace fs = std::filesystem;

namespace {

bool mentions(const std::vector<std::string>& errors, const std::string& needle) {
  for (const auto& e : errors)
    if (e.find(needle) != std::string::npos) return true;
  return false;
}

RunConfig small_evolve(const fs::path& dir) {
  RunConfig c;
  c.output_dir = dir.string();
  c.grid = {256, 60.0};
  c.solver.dt = 0.01;
  c.solver.t_end = 0.2;
  c.solver.output_stride = 5;
  return c;
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("cubiclab_test_" + name + "_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()));
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST(Config, DefaultsFromMinimalDocument) {
  const auto r = parse_config("experiment = evolve\n");
  ASSERT_TRUE(r.ok()) << (r.errors.empty() ? "" : r.errors.front());
  EXPECT_EQ(*r.config, RunConfig{});
}

TEST(Config, RoundTripEveryExperiment) {
  for (auto name : experiment_names()) {
    RunConfig c;
    c.experiment = *experiment_from_string(name);
    c.seed = 42;
    c.grid = {2048, 321.5};
    c.nonlinearity.gamma_im = 0.25;
    c.solver.scheme = "strang";
    c.initial.carrier = 0.75;
    c.options.k_list = {5, 6};
    c.options.t_hi = 500.0;
    c.options.lp_scheme = "lattice";
    const auto text = serialize(c);
    const auto r = parse_config(text);
    ASSERT_TRUE(r.ok()) << name << ": " << (r.errors.empty() ? "" : r.errors.front());
    // Keys outside the selected experiment are not serialized, so compare the text form.
    EXPECT_EQ(serialize(*r.config), text) << name;
    EXPECT_EQ(config_hash(*r.config), config_hash(c));
  }
}

TEST(Config, AccumulatesErrors) {
  const auto r = parse_config(
      "experiment = evolve\n"
      "[grid]\nn_points = 100\n"
      "[solver]\ndt = -1\n");
  EXPECT_FALSE(r.ok());
  EXPECT_EQ(r.errors.size(), 2u);
  EXPECT_TRUE(mentions(r.errors, "grid.n_points"));
  EXPECT_TRUE(mentions(r.errors, "solver.dt"));
}

TEST(Config, UnknownDispersionIsNamed) {
  const auto r = parse_config("experiment = evolve\n[dispersion]\nname = airy3\n");
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(mentions(r.errors, "airy3"));
}

TEST(Config, RejectsUnknownAndMistypedKeys) {
  EXPECT_TRUE(mentions(parse_config("experiment = evolve\ncolour = red\n").errors, "colour"));
  EXPECT_TRUE(mentions(parse_config("experiment = evolve\n[grid]\nn_points = many\n").errors, "grid.n_points"));
  // [options] keys belong to particular experiments.
  EXPECT_TRUE(mentions(parse_config("experiment = evolve\n[options]\nomega = 2\n").errors, "omega"));
  EXPECT_TRUE(parse_config("experiment = soliton\n[options]\nomega = 2\n").ok());
  EXPECT_TRUE(mentions(parse_config("[grid]\nn_points = 64\n").errors, "experiment"));
  EXPECT_TRUE(mentions(parse_config("experiment = teleport\n").errors, "teleport"));
  EXPECT_FALSE(parse_config("[grid\n").ok());
  EXPECT_TRUE(mentions(parse_config_file("/nonexistent/cfg.ini").errors, "cannot open"));
}

TEST(Config, ExperimentSpecificValidation) {
  RunConfig c;
  c.experiment = ExperimentKind::bilinear_probe;
  c.options.j = 1;
  c.options.k_list = {2};
  EXPECT_TRUE(mentions(validate(c), "options.k_list"));
  c.experiment = ExperimentKind::modified_scattering;
  c.options.t_lo = 10.0;
  c.options.t_hi = 20.0;
  EXPECT_TRUE(mentions(validate(c), "options.t_hi"));
}

TEST(Config, HashTracksContent) {
  RunConfig a, b;
  EXPECT_EQ(config_hash(a), config_hash(b));
  b.seed = 1;
  EXPECT_NE(config_hash(a), config_hash(b));
}

TEST(Config, SeededNoiseIsReproducible) {
  RunConfig c;
  c.initial.noise = 0.01;
  c.seed = 7;
  const auto a = build_initial(c), b = build_initial(c);
  EXPECT_EQ(a.values, b.values);
  c.seed = 8;
  EXPECT_NE(build_initial(c).values, a.values);
  c.initial.noise = 0.0;
  EXPECT_EQ(build_initial(c).values, build_initial(RunConfig{}).values);
}

TEST(Runner, TraceCsvSchema) {
  const auto out = execute(small_evolve(scratch("csv")));
  std::ostringstream os;
  write_trace_csv(os, out.trace);
  std::istringstream is(os.str());
  std::string header, row;
  std::getline(is, header);
  std::getline(is, row);
  EXPECT_EQ(header, "time,mass,momentum,l6_accum,linfty,envelope_ratio,morawetz_I,morawetz_rate,bilinear_accum");
  EXPECT_NE(row.find(",,,"), std::string::npos);  // optional columns left empty
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), 8);
}

TEST(Runner, WritesOutputsAndReport) {
  const auto dir = scratch("ok");
  const auto cfg = small_evolve(dir);
  std::ostringstream log;
  EXPECT_EQ(run_command(cfg, {true, "test"}, log), kExitOk);
  for (const char* f : {"trace.csv", "report.json", "manifest.json"}) EXPECT_TRUE(fs::exists(dir / f)) << f;
  std::ifstream rf(dir / "report.json");
  const auto report = nlohmann::json::parse(rf);
  EXPECT_EQ(report["experiment"], "evolve");
  EXPECT_TRUE(report["pass"].get<bool>());
  std::ifstream mf(dir / "manifest.json");
  const auto manifest = nlohmann::json::parse(mf);
  EXPECT_EQ(manifest["exit_status"], 0);
  EXPECT_EQ(manifest["version"], "test");
  EXPECT_EQ(parse_config(manifest["config"].get<std::string>()).config, cfg);
  fs::remove_all(dir);
}

TEST(Runner, UnwritableOutputDirectory) {
  const auto base = scratch("io");
  fs::create_directories(base);
  std::ofstream(base / "file") << "x";
  auto cfg = small_evolve(base / "file" / "sub");
  std::ostringstream log;
  EXPECT_EQ(run_command(cfg, {true, "test"}, log), kExitIo);
  fs::remove_all(base);
}

TEST(Runner, BlowUpExitCode) {
  const auto dir = scratch("blowup");
  auto cfg = small_evolve(dir);
  cfg.nonlinearity.gamma_re = 0.0;
  cfg.nonlinearity.gamma_im = 1.0;
  cfg.initial.amplitude = 1.0;
  cfg.solver.t_end = 2.0;
  cfg.solver.dt = 0.001;
  std::ostringstream log;
  EXPECT_EQ(run_command(cfg, {true, "test"}, log), kExitBlowUp);
  EXPECT_TRUE(fs::exists(dir / "trace.csv"));
  fs::remove_all(dir);
}

TEST(Runner, LibraryErrorsAreValidationFailures) {
  const auto dir = scratch("cap");
  auto cfg = small_evolve(dir);
  cfg.initial.amplitude = 10.0;
  cfg.solver.dt = 0.1;
  cfg.solver.t_end = 1.0;
  std::ostringstream log;
  EXPECT_EQ(run_command(cfg, {true, "test"}, log), kExitValidation);
  EXPECT_NE(log.str().find("stability"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Runner, SolitonWritesProfile) {
  const auto dir = scratch("soliton");
  RunConfig cfg;
  cfg.experiment = ExperimentKind::soliton;
  cfg.output_dir = dir.string();
  cfg.grid = {512, 40.0};
  std::ostringstream log;
  // The default symbol is defocusing: no standing wave exists.
  EXPECT_EQ(run_command(cfg, {true, "test"}, log), kExitValidation);
  cfg.nonlinearity.gamma_re = -2.0;
  EXPECT_EQ(run_command(cfg, {true, "test"}, log), kExitOk) << log.str();
  EXPECT_TRUE(fs::exists(dir / "profile.csv"));
  fs::remove_all(dir);
}
