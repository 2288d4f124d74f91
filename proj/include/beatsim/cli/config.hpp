#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "beatsim/model.hpp"
#include "beatsim/oracle/ladder.hpp"

namespace beatsim::cli {

enum class EngineChoice { Analytic, Ode, Mc, All };
enum class InitialCondition { eg, ee };

std::string_view to_string(EngineChoice engine);
std::string_view to_string(InitialCondition initial);

/// Everything a run needs. Defaults reproduce the figure1 regime.
struct ScenarioConfig {
  ModelParams params = ModelParams::from_beat(8.0, 0.05, 1.0);
  double t_max = 6.0;
  int n_steps = 601;
  EngineChoice engine = EngineChoice::Analytic;
  InitialCondition initial = InitialCondition::ee;
  double detector_radius = 0.0;
  oracle::LadderSettings ode;
  std::uint64_t n_traj = 100000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string out = "correlation.csv";
  std::string events;
  std::string report;
  bool normalized = false;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Carries the [section] key and, for file input, the 1-based line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, int line, const std::string& what);

  [[nodiscard]] const std::string& field() const { return field_; }
  [[nodiscard]] int line() const { return line_; }

 private:
  std::string field_;
  int line_;
};

/// Sets one key; `line` is 0 for settings that did not come from a file.
void apply_setting(ScenarioConfig& config, std::string_view section, std::string_view key,
                   std::string_view value, int line = 0);

/// Applies "section.key=value".
void apply_assignment(ScenarioConfig& config, std::string_view assignment);

/// Parses INI-style text ([params], [engine], [ode], [mc], [output]) on top of
/// `base`. Blank lines and lines starting with '#' or ';' are ignored, as is
/// a '#' or ';' comment that follows whitespace.
ScenarioConfig parse_config(std::string_view text, ScenarioConfig base = {});

/// Full configuration as text accepted by parse_config.
std::string dump_config(const ScenarioConfig& config);

/// Figure 1 regime: gamma_N = 1, delta_omega = 8, gamma_L = 0.05,
/// t_max = 6 / gamma_N, initial |eg>.
ScenarioConfig figure1_config();

}  // namespace beatsim::cli
