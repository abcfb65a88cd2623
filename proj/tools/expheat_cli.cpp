// expheat: runs one scenario and writes CSVs plus summary.json.
//
//   expheat evolve --set amplitude=2 --out runs/evolve
//   expheat experiment blowup --config blowup.cfg --out runs/blowup
//
// Exit status: 0 when every check passes, 1 when a check fails, 2 for
// configuration errors, 3 when a module fails.

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "expheat/config.hpp"
#include "expheat/error.hpp"
#include "expheat/experiments.hpp"

namespace {

struct Options {
  std::string config_file;
  std::vector<std::string> sets;
  std::string out;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config_file, "key=value configuration file")
      ->check(CLI::ExistingFile);
  cmd->add_option("--set", o.sets, "override, key=value (repeatable)")
      ->allow_extra_args(false);
  cmd->add_option("--out", o.out, "output directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radial semilinear heat equation with exponential nonlinearity"};
  app.require_subcommand(1);

  Options opts;
  std::string experiment_name;
  for (const char* name : {"evolve", "shoot", "scan-alpha", "orlicz-norm"}) {
    add_common(app.add_subcommand(name), opts);
  }
  auto* exp = app.add_subcommand("experiment", "run a named experiment");
  std::string choices;
  for (const char* e : expheat::kExperiments) {
    choices += choices.empty() ? e : std::string(", ") + e;
  }
  exp->add_option("name", experiment_name, "one of: " + choices)->required();
  add_common(exp, opts);

  CLI11_PARSE(app, argc, argv);

  const std::string scenario = app.get_subcommands().front()->get_name();
  try {
    std::optional<std::string> file;
    if (!opts.config_file.empty()) file = opts.config_file;
    auto overrides = opts.sets;
    if (!opts.out.empty()) overrides.push_back("output_dir=" + opts.out);
    const auto cfg = expheat::parse_config(
        scenario, scenario == "experiment" ? experiment_name : "global-decay",
        file, overrides);

    const auto summary = expheat::run_scenario(cfg);
    std::printf("%s: %s (%.2f s)\n",
                scenario == "experiment" ? experiment_name.c_str()
                                         : scenario.c_str(),
                summary.outcome.c_str(), summary.wall_clock_seconds);
    for (const auto& [name, ok] : summary.checks) {
      std::printf("  %-36s %s\n", name.c_str(), ok ? "pass" : "FAIL");
    }
    std::printf("output: %s\n", cfg.output_dir.c_str());
    return summary.passed() ? 0 : 1;
  } catch (const expheat::ConfigError& e) {
    std::fprintf(stderr, "config error [%s]: %s\n", e.key().c_str(), e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
