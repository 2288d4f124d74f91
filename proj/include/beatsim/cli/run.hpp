#pragma once

#include <filesystem>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "beatsim/cli/config.hpp"
#include "beatsim/events.hpp"
#include "beatsim/series.hpp"

namespace beatsim::cli {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int config = 2;
inline constexpr int output = 3;
inline constexpr int runtime = 4;
}  // namespace exit_code

/// The L2-conditioned row of one engine. Densities are per unit length;
/// visibility is NaN where it is undefined.
struct EngineColumns {
  Engine engine = Engine::Analytic;
  std::vector<double> t;
  std::vector<double> p_L2L1;
  std::vector<double> p_L2L2;
  std::vector<double> p_L2N;
  std::vector<double> visibility;
};

struct RunProducts {
  std::vector<EngineColumns> columns;
  /// Detection records per Monte Carlo trajectory (kept when an events path is set).
  std::vector<std::vector<DetectionEvent>> events;
  /// Convergence and sampling details for verbose output.
  std::string diagnostics;
};

/// Engines selected by the config, in analytic, ode, mc order.
std::vector<Engine> selected_engines(const ScenarioConfig& config);

/// Runs the selected engines. The config must already validate.
RunProducts compute(const ScenarioConfig& config);

/// `t,p_L2L1,p_L2L2,p_L2N,visibility,engine`, 17 significant digits, LF
/// endings, an empty field for undefined visibility. With normalized set,
/// t is reported as gamma_N t and densities as c p / gamma_N.
std::string format_csv(const ScenarioConfig& config, const std::vector<EngineColumns>& columns);

/// `trajectory_id,first_channel,first_time,second_channel,second_time`.
std::string format_events(const std::vector<std::vector<DetectionEvent>>& events);

/// Max and mean absolute deviation per column for every pair of engines.
std::string format_report(const ScenarioConfig& config, const std::vector<EngineColumns>& columns);

/// Where the comparison report goes: config.report, or `out` with its
/// extension replaced by `.report.txt`.
std::filesystem::path report_path(const ScenarioConfig& config);

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Writes to a sibling temporary file, then renames it over `path`.
/// Throws OutputError on any failure; no partial file is left behind.
void write_file_atomically(const std::filesystem::path& path, std::string_view content);

/// Validates, computes and writes every output. Diagnostics go to `log`.
/// Returns one of the exit_code values.
int run(const ScenarioConfig& config, std::ostream& log, bool verbose = false);

}  // namespace beatsim::cli
