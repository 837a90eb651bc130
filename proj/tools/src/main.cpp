// finharm: batch runner for the harmonic-analysis experiments.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "finharm/parallel.hpp"
#include "runner.hpp"

namespace {

using finharm::cli::ConfigError;
using finharm::cli::RunContext;
using finharm::cli::Status;
using nlohmann::json;

struct Common {
  std::string config;
  std::uint64_t seed = 0;
  std::string out = "out";
  unsigned threads = 0;
  double grid_density = 20.0;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "JSON experiment config (schema 1)")->check(CLI::ExistingFile);
  app->add_option("--seed", c.seed, "RNG seed; overrides the config");
  app->add_option("--out", c.out, "output directory for CSV files")->capture_default_str();
  app->add_option("--threads", c.threads, "worker threads (0 = hardware default)")->capture_default_str();
  app->add_option("--grid-density", c.grid_density, "grid points per unit length on continuous grids")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

json load(const std::string& path) {
  std::ifstream in(path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", path + ": " + e.what());
  }
}

RunContext context(const Common& c, CLI::App* app, std::uint64_t config_seed, bool has_config_seed) {
  RunContext ctx;
  ctx.seed = app->count("--seed") ? c.seed : (has_config_seed ? config_seed : 42);
  ctx.out = c.out;
  ctx.grid_density = c.grid_density;
  ctx.log = &std::cerr;
  finharm::set_thread_count(c.threads);
  return ctx;
}

int report(const std::string& name, Status s, const RunContext& ctx) {
  std::cout << name << ": " << finharm::cli::to_string(s) << '\n';
  for (const auto& a : ctx.artifacts) std::cout << "  wrote " << a.string() << '\n';
  return static_cast<int>(s);
}

// One experiment named on the command line or in the config.
int run_one(const std::string& positional, const Common& c, CLI::App* app) {
  finharm::cli::ExperimentConfig cfg;
  if (!c.config.empty()) cfg = finharm::cli::parse_config(load(c.config));
  if (!positional.empty()) {
    if (!cfg.experiment.empty() && cfg.experiment != positional) {
      throw ConfigError("/experiment", "config names '" + cfg.experiment + "' but the command line asks for '" + positional + "'");
    }
    cfg.experiment = positional;
  }
  if (cfg.experiment.empty()) throw ConfigError("/experiment", "no experiment given (pass a name or --config)");
  RunContext ctx = context(c, app, cfg.seed, cfg.has_seed);
  return report(cfg.experiment, finharm::cli::run_experiment(cfg.experiment, cfg.params, ctx), ctx);
}

// The property suite at moderate sizes, one summary row per experiment.
int verify(const Common& c, CLI::App* app) {
  RunContext ctx = context(c, app, 0, false);
  const std::vector<std::pair<std::string, json>> suite{
      {"dft-roundtrip", {{"instances", 200}}},
      {"inequality-suite", {{"instances", 1000}}},
      {"adjoint-build", {{"family", "circle"}, {"n", 256}, {"r", 0.09817477042468103}}},
      {"adjoint-build", {{"family", "reals"}}},
      {"adjoint-build", {{"family", "integer"}, {"n", 64}, {"k", 15}}},
      {"adjoint-build", {{"family", "tower"}, {"p", 3}, {"j", 2}, {"k", 3}}},
      {"transform", {{"n_start", 256}, {"n_end", 4096}}},
      {"stability", {{"trials", 200}}},
      {"bohr-chain", {{"chains", 200}}},
  };
  Status all = Status::Pass;
  std::vector<std::pair<std::string, Status>> rows;
  const auto base = ctx.out;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    ctx.out = base / (std::to_string(i) + "-" + suite[i].first);
    const Status s = finharm::cli::run_experiment(suite[i].first, suite[i].second, ctx);
    std::cout << suite[i].first << ": " << finharm::cli::to_string(s) << '\n';
    rows.emplace_back(suite[i].first, s);
    all = finharm::cli::worst(all, s);
  }
  std::filesystem::create_directories(base);
  std::ofstream os(base / "verify.csv", std::ios::binary);
  os << "experiment,status\n";
  for (const auto& [name, s] : rows) os << name << ',' << finharm::cli::to_string(s) << '\n';
  return static_cast<int>(all);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finharm: finite harmonic analysis experiments"};
  app.require_subcommand(1);
  Common common;
  std::string experiment;

  auto* run = app.add_subcommand("run", "run one experiment");
  run->add_option("experiment", experiment, "experiment name (see list)");
  add_common(run, common);
  auto* bench = app.add_subcommand("bench", "time the reference and fast DFT");
  add_common(bench, common);
  auto* verify_cmd = app.add_subcommand("verify", "run the full property suite");
  add_common(verify_cmd, common);
  app.add_subcommand("list", "list registered experiments");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return finharm::cli::kUsageExit;
  }

  try {
    if (app.got_subcommand("list")) {
      for (const auto& e : finharm::cli::registry()) std::printf("%-17s %s\n", e.name.c_str(), e.summary.c_str());
      return 0;
    }
    if (app.got_subcommand(run)) return run_one(experiment, common, run);
    if (app.got_subcommand(bench)) return run_one("bench", common, bench);
    return verify(common, verify_cmd);
  } catch (const ConfigError& e) {
    std::cerr << "config error at " << (e.pointer().empty() ? std::string("<root>") : e.pointer()) << ": "
              << std::string(e.what()).substr(e.pointer().size() + 2) << '\n';
    return finharm::cli::kUsageExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return finharm::cli::kUsageExit;
  }
}
