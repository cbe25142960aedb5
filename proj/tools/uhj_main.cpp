// uhj: run Hamilton–Jacobi checks and flow comparisons from JSON configs.
//
// Exit codes: 0 when every verdict passes, 1 when any check fails, 2 on a
// usage, configuration or validation error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "runner/config.hpp"
#include "runner/runner.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

int emit(const nlohmann::json& report, const std::optional<std::string>& out) {
  const std::string text = report.dump(2) + "\n";
  if (out) {
    std::ofstream file(*out);
    if (!file) {
      std::cerr << "uhj: cannot write " << *out << "\n";
      return kUsage;
    }
    file << text;
  } else {
    std::cout << text;
  }
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hamilton–Jacobi checks on almost-Poisson fibered models", "uhj"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", uhj::cli::kToolkitVersion);

  std::optional<std::string> out;
  std::optional<std::string> csv_dir;
  std::optional<double> tol;
  std::optional<std::size_t> grid;
  std::uint64_t seed = 1;
  std::size_t samples = 500;
  app.add_option("--out", out, "write the JSON report to this file");
  app.add_option("--csv-dir", csv_dir, "directory for trajectory CSV dumps");
  app.add_option("--tol", tol, "override tolerances.defect_tol");
  app.add_option("--grid", grid, "override every per-axis grid count");
  app.add_option("--seed", seed, "seed for randomized subcommands");
  app.add_option("--samples", samples, "sample count for cross-check");

  std::string config_path;
  struct Command {
    const char* name;
    const char* help;
    const char* check;  // nullptr: use the config's list
  };
  const Command commands[] = {
      {"run", "run the checks listed in the config", nullptr},
      {"check-lagrangian", "graph residual and subspace Lagrangian tests", "lagrangian"},
      {"check-hj", "Hamilton–Jacobi condition and relatedness", "hj"},
      {"flow-compare", "integrate and compare lifted and upstairs flows", "flow"},
      {"rank-scan", "characteristic rank statistics over the grid", "rank"},
      {"cross-check", "randomized graph-residual vs subspace agreement", nullptr},
  };
  std::vector<CLI::App*> subs;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("config", config_path, "experiment config (JSON)")->required();
    subs.push_back(sub);
  }
  CLI::App* list = app.add_subcommand("list-models", "registry names and parameters");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kUsage;
  }

  try {
    if (list->parsed()) return emit(uhj::cli::list_models(), out);

    uhj::cli::RunOptions options;
    options.tol = tol;
    options.grid = grid;
    options.csv_dir = csv_dir;
    options.seed = seed;
    options.samples = samples;

    const uhj::cli::ExperimentConfig config = uhj::cli::load_config(config_path);
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (!subs[i]->parsed()) continue;
      uhj::cli::RunResult result;
      if (std::string(commands[i].name) == "cross-check") {
        result = uhj::cli::cross_check(config, options);
      } else if (commands[i].check) {
        result = uhj::cli::run_checks(config, {commands[i].check}, options);
      } else {
        result = uhj::cli::run_checks(config, config.checks, options);
      }
      const int written = emit(result.report, out);
      if (written != kPass) return written;
      return result.passed ? kPass : kFail;
    }
  } catch (const uhj::cli::ConfigError& e) {
    std::cerr << "uhj: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "uhj: " << e.what() << "\n";
    return kUsage;
  }
  std::cerr << app.help();
  return kUsage;
}
