#include <algorithm>
#include <atomic>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "cubiclab/symbols.hpp"
#include "cubiclab_cli/config.hpp"
#include "cubiclab_cli/runner.hpp"

#ifndef CUBICLAB_VERSION
#define CUBICLAB_VERSION "0.0.0"
#endif

namespace {

using namespace cubiclab::cli;

int severity(int code) {
  switch (code) {
    case kExitOk:
      return 0;
    case kExitBlowUp:
      return 1;
    case kExitValidation:
      return 2;
    case kExitIo:
      return 3;
    default:
      return 4;
  }
}

std::optional<RunConfig> load(const std::string& path, std::ostream& err) {
  auto parsed = parse_config_file(path);
  if (!parsed.ok()) {
    for (const auto& e : parsed.errors) err << path << ": " << e << '\n';
    return std::nullopt;
  }
  return parsed.config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cubiclab: numerical laboratory for 1D cubic dispersive equations"};
  app.set_version_flag("--version", CUBICLAB_VERSION);
  app.require_subcommand(1);

  std::string output_dir;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  app.add_option("--output-dir", output_dir, "Override the output directory of every config");
  app.add_option("--seed", seed, "Override the seed of every config");
  app.add_flag("-q,--quiet", quiet, "Only print errors");

  std::vector<std::string> run_files;
  unsigned jobs = 1;
  auto* run_cmd = app.add_subcommand("run", "Run one or more experiment configs");
  run_cmd->add_option("configs", run_files, "Config files")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("-j,--jobs", jobs, "Configs to run concurrently")->check(CLI::Range(1u, 256u));

  std::vector<std::string> validate_files;
  auto* validate_cmd = app.add_subcommand("validate", "Check config files and report every error");
  validate_cmd->add_option("configs", validate_files, "Config files")->required();

  auto* list_cmd = app.add_subcommand("list-symbols", "List the named dispersion relations and nonlinearities");

  CLI11_PARSE(app, argc, argv);

  if (list_cmd->parsed()) {
    for (const auto& e : cubiclab::symbol_catalog()) {
      std::cout << e.kind << '\t' << e.name << '\t' << e.description << '\n';
    }
    return kExitOk;
  }

  if (validate_cmd->parsed()) {
    int status = kExitOk;
    for (const auto& f : validate_files) {
      if (load(f, std::cerr)) {
        if (!quiet) std::cout << f << ": ok\n";
      } else {
        status = kExitValidation;
      }
    }
    return status;
  }

  std::vector<RunConfig> configs;
  int status = kExitOk;
  for (const auto& f : run_files) {
    auto cfg = load(f, std::cerr);
    if (!cfg) {
      status = kExitValidation;
      continue;
    }
    if (seed) cfg->seed = *seed;
    if (!output_dir.empty()) {
      cfg->output_dir = run_files.size() == 1
                            ? output_dir
                            : (std::filesystem::path(output_dir) / std::filesystem::path(f).stem()).string();
    }
    configs.push_back(std::move(*cfg));
  }
  if (status != kExitOk) return status;

  RunOptions opts;
  opts.quiet = quiet;
  opts.version = CUBICLAB_VERSION;
  std::vector<int> codes(configs.size(), kExitOk);
  std::vector<std::string> logs(configs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      std::ostringstream log;
      codes[i] = run_command(configs[i], opts, log);
      logs[i] = log.str();
    }
  };
  const unsigned workers = std::min<unsigned>(jobs, static_cast<unsigned>(configs.size()));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (std::size_t i = 0; i < configs.size(); ++i) {
    (codes[i] == kExitOk ? std::cout : std::cerr) << logs[i];
    if (severity(codes[i]) > severity(status)) status = codes[i];
  }
  return status;
}
