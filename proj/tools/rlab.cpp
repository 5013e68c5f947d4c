// Command-line front end: run, describe, compare, verify.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rlab/experiment.hpp"
#include "rlab/parallel.hpp"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

void print_manifest(const rlab::RunManifest& m, const std::filesystem::path& out) {
  for (const auto& a : m.assertions)
    std::cout << (a.pass ? "PASS " : "FAIL ") << a.name << ": " << a.detail << '\n';
  if (!m.error.empty()) std::cout << "ERROR " << m.error << '\n';
  std::cout << m.scenario << (m.pass ? " passed" : " failed") << "; manifest "
            << (out / "manifest.json").string() << '\n';
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"rlab: spectral lab for quadratic Schroedinger flows with potentials"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::optional<int> seed, threads;
  auto* run = app.add_subcommand("run", "execute a scenario from a config file");
  run->add_option("--config", config_path, "INI config")->required();
  run->add_option("--out", out_dir, "output directory (default run.output)");
  run->add_option("--seed", seed, "override run.seed");
  run->add_option("--threads", threads, "worker threads (default RLAB_THREADS or 1)");

  std::string scenario;
  bool list = false;
  auto* describe = app.add_subcommand("describe", "explain a scenario");
  describe->add_option("scenario", scenario, "scenario id");
  describe->add_flag("--list", list, "list scenario ids");

  std::string manifest_a, manifest_b;
  auto* compare = app.add_subcommand("compare", "diff the metrics of two runs");
  compare->add_option("a", manifest_a, "first manifest.json")->required();
  compare->add_option("b", manifest_b, "second manifest.json")->required();

  std::string manifest;
  auto* verify = app.add_subcommand("verify", "check a manifest against its files");
  verify->add_option("manifest", manifest, "manifest.json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (*run) {
      auto cfg = rlab::ExperimentConfig::load(config_path);
      if (seed) cfg.set("run.seed", std::to_string(*seed));
      if (threads) rlab::set_thread_count(*threads);
      if (out_dir.empty()) out_dir = cfg.get_string("run.output", std::string());
      if (out_dir.empty()) {
        cfg.validate();
        throw rlab::ConfigError("no output directory: pass --out or set run.output");
      }
      const auto m = rlab::run_experiment(cfg, out_dir);
      print_manifest(m, out_dir);
      if (!m.error.empty()) return kExitRuntime;
      return m.pass ? 0 : kExitFail;
    }
    if (*describe) {
      if (list || scenario.empty()) {
        for (const auto& s : rlab::scenario_ids()) std::cout << s << '\n';
        return 0;
      }
      std::cout << rlab::describe_scenario(scenario);
      return 0;
    }
    if (*compare) {
      const auto rows = rlab::compare_manifests(rlab::RunManifest::load(manifest_a),
                                                rlab::RunManifest::load(manifest_b));
      std::cout << rlab::diff_csv(rows);
      return 0;
    }
    if (*verify) {
      const auto problems = rlab::verify_manifest(manifest);
      for (const auto& p : problems) std::cout << p << '\n';
      std::cout << (problems.empty() ? "manifest ok\n" : "manifest invalid\n");
      return problems.empty() ? 0 : kExitFail;
    }
  } catch (const rlab::ConfigError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
