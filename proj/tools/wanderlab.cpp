// wanderlab <experiment> [--config file.toml] [--seed N] [--out dir] [--check]
//
// Exit status: 0 when every check passes, 1 when a check fails, 2 on a
// configuration error.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "wanderlab/cli/config.hpp"
#include "wanderlab/cli/runner.hpp"

namespace {

constexpr int exit_check_failed = 1;
constexpr int exit_config_error = 2;

}  // namespace

int main(int argc, char** argv) {
  using namespace wanderlab;
  CLI::App app{"Wandering-domain experiment driver"};
  app.set_version_flag("--version", std::string(cli::tool_version));
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  bool fail_fast = false;

  for (const auto& kind : cli::experiment_kinds) {
    auto* sub = app.add_subcommand(kind, "run the " + kind + " experiment");
    sub->add_option("--config", config_path, "TOML configuration file")->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "seed for random sampling (overrides the config)");
    sub->add_option("--out", out, "output directory (overrides the config)");
    sub->add_flag("--check", fail_fast, "stop at the first failed check");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_config_error;
  }
  const std::string kind = app.get_subcommands().front()->get_name();

  cli::ExperimentConfig cfg;
  try {
    if (config_path.empty()) {
      if (kind != "suite") cli::detail::config_error("--config is required for '" + kind + "'");
      cfg = cli::reference_suite();
    } else {
      cfg = cli::load_config(config_path);
    }
    if (cfg.kind != kind && cfg.kind != "suite") {
      cli::detail::config_error("config describes '" + cfg.kind + "', not '" + kind + "'");
    }
    cfg.kind = kind;
    if (seed) cfg.seed = *seed;
    if (out) cfg.out = *out;
    // Re-validate: the selected experiment must have its table.
    cfg = cli::parse_config(cli::to_toml(cfg));
  } catch (const Error& e) {
    std::cerr << "wanderlab: " << e.what() << '\n';
    return exit_config_error;
  }

  try {
    const auto report = cli::run(cfg, cfg.out, fail_fast);
    for (const auto& c : report.checks) {
      std::cout << (c.passed ? "PASS " : "FAIL ") << c.name;
      if (!c.detail.empty()) std::cout << "  " << c.detail;
      std::cout << '\n';
    }
    std::cout << "report: " << (std::filesystem::path(cfg.out) / "report.json").string() << '\n';
    return report.passed() ? 0 : exit_check_failed;
  } catch (const Error& e) {
    std::cerr << "wanderlab: " << e.what() << '\n';
    return e.code() == Errc::ConfigError ? exit_config_error : exit_check_failed;
  }
}
