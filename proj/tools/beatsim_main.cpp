// beatsim: two-photon correlations of a Förster-coupled emitter pair.
//
//   beatsim run [--config FILE] [--set section.key=value ...] [flags]
//   beatsim figure1 [same overrides]

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "beatsim/cli/config.hpp"
#include "beatsim/cli/run.hpp"

namespace {

struct Overrides {
  std::string config_file;
  std::vector<std::string> assignments;
  std::optional<std::string> engine;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> events;
  std::optional<std::string> report;
  std::optional<unsigned> threads;
  bool normalized = false;
  bool dump_config = false;
  bool verbose = false;
};

void add_overrides(CLI::App& cmd, Overrides& o) {
  cmd.add_option("--config", o.config_file, "INI-style scenario file")->check(CLI::ExistingFile);
  cmd.add_option("--set", o.assignments, "Override one key, e.g. --set params.gamma_L=0.1");
  cmd.add_option("--engine", o.engine, "analytic, ode, mc or all");
  cmd.add_option("--seed", o.seed, "Monte Carlo master seed");
  cmd.add_option("--out", o.out, "Correlation CSV path");
  cmd.add_option("--events", o.events, "Monte Carlo event file path");
  cmd.add_option("--report", o.report, "Comparison report path (engine=all)");
  cmd.add_option("--threads", o.threads, "Monte Carlo worker threads");
  cmd.add_flag("--normalized", o.normalized, "Report t in 1/gamma_N and densities as c p / gamma_N");
  cmd.add_flag("--dump-config", o.dump_config, "Print the effective configuration and exit");
  cmd.add_flag("--verbose", o.verbose, "Print convergence and sampling details to stderr");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw beatsim::cli::ConfigError("", 0, "cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

// File < --set < named flags.
beatsim::cli::ScenarioConfig resolve(beatsim::cli::ScenarioConfig config, const Overrides& o) {
  using beatsim::cli::apply_setting;
  if (!o.config_file.empty()) config = beatsim::cli::parse_config(read_file(o.config_file), config);
  for (const auto& a : o.assignments) beatsim::cli::apply_assignment(config, a);
  if (o.engine) apply_setting(config, "engine", "engine", *o.engine);
  if (o.seed) config.seed = *o.seed;
  if (o.out) config.out = *o.out;
  if (o.events) config.events = *o.events;
  if (o.report) config.report = *o.report;
  if (o.threads) config.threads = *o.threads;
  if (o.normalized) config.normalized = true;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-photon correlations of a coupled emitter pair"};
  app.require_subcommand(1);

  Overrides run_opts;
  Overrides fig_opts;
  CLI::App* run_cmd = app.add_subcommand("run", "Run a scenario (defaults: |ee>, analytic engine)");
  CLI::App* fig_cmd = app.add_subcommand("figure1", "Figure 1 preset: |eg>, gamma_N = 1, delta_omega = 8, gamma_L = 0.05");
  add_overrides(*run_cmd, run_opts);
  add_overrides(*fig_cmd, fig_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : beatsim::cli::exit_code::config;
  }

  const bool figure1 = fig_cmd->parsed();
  const Overrides& o = figure1 ? fig_opts : run_opts;
  beatsim::cli::ScenarioConfig config;
  try {
    config = resolve(figure1 ? beatsim::cli::figure1_config() : beatsim::cli::ScenarioConfig{}, o);
    if (o.dump_config) config.validate();
  } catch (const beatsim::cli::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return beatsim::cli::exit_code::config;
  }

  if (o.dump_config) {
    std::cout << beatsim::cli::dump_config(config);
    return beatsim::cli::exit_code::ok;
  }
  return beatsim::cli::run(config, std::cerr, o.verbose);
}
