#include "beatsim/cli/run.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>

#include "beatsim/analytic.hpp"
#include "beatsim/correlator.hpp"
#include "beatsim/oracle/jumps.hpp"
#include "beatsim/oracle/ladder.hpp"

namespace beatsim::cli {

namespace {

const double nan = std::numeric_limits<double>::quiet_NaN();

std::string format_double(double v) {
  if (!std::isfinite(v)) return {};
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

std::vector<double> envelope_visibility(const ModelParams& p, const std::vector<double>& t,
                                        const std::vector<double>& values, std::ostream& notes) {
  try {
    return extract_visibility(p, t, values).values;
  } catch (const std::domain_error& e) {
    notes << "visibility undefined: " << e.what() << "\n";
    return std::vector<double>(t.size(), nan);
  }
}

EngineColumns analytic_columns(const ScenarioConfig& config, const std::vector<double>& grid) {
  const auto& p = config.params;
  EngineColumns out;
  out.engine = Engine::Analytic;
  out.t = grid;
  for (double t : grid) {
    out.p_L2L1.push_back(analytic::p_L2_L1(p, t));
    out.p_L2L2.push_back(analytic::p_L2_L2(p, t));
    out.p_L2N.push_back(analytic::p_L2_N(p, t));
    out.visibility.push_back(analytic::visibility(p, t));
  }
  return out;
}

EngineColumns ode_columns(const ScenarioConfig& config, const std::vector<double>& grid,
                          std::ostream& notes) {
  const auto& p = config.params;
  const oracle::WwSystem sys = oracle::make_system(p, config.ode);
  const double dt = config.ode.dt > 0.0 ? config.ode.dt : oracle::default_dt(sys);
  // Both initial conditions leave |eg> behind after the L2 detection.
  const oracle::WwResult result = oracle::integrate_ww(sys, post_detection_state(Channel::L2), grid, dt);
  notes << oracle::describe(sys, result);

  EngineColumns out;
  out.engine = Engine::Ode;
  out.t = grid;
  for (const auto& sample : result.samples) {
    out.p_L2L1.push_back(oracle::readout_density(p, sample.system, Channel::L1));
    out.p_L2L2.push_back(oracle::readout_density(p, sample.system, Channel::L2));
    out.p_L2N.push_back(oracle::readout_density(p, sample.system, Channel::N));
  }
  out.visibility = envelope_visibility(p, grid, out.p_L2L1, notes);
  return out;
}

EngineColumns mc_columns(const ScenarioConfig& config, const std::vector<double>& grid,
                         std::vector<std::vector<DetectionEvent>>& events, std::ostream& notes) {
  const auto& p = config.params;
  oracle::MonteCarloOptions options;
  options.n_traj = config.n_traj;
  options.master_seed = config.seed;
  options.edges = centered_bin_edges(grid);
  options.n_threads = config.threads;
  options.keep_events = !config.events.empty();
  options.jump.detector_radius = config.detector_radius;

  oracle::DelayHistogram hist;
  notes << "[mc]\ngenerator = " << oracle::generator_name << "\nseed = " << config.seed
        << "\nn_traj = " << config.n_traj << "\ninitial = " << to_string(config.initial) << "\n";
  if (config.initial == InitialCondition::ee) {
    oracle::CascadeHistogram cascade = oracle::cascade_histogram(p, options);
    notes << "first_L1 = " << cascade.first_counts[0] << "\nfirst_L2 = " << cascade.first_counts[1]
          << "\nfirst_N = " << cascade.first_counts[2] << "\nno_detection = " << cascade.no_detection << "\n";
    hist = std::move(cascade.conditional[static_cast<std::size_t>(Channel::L2)]);
    events = std::move(cascade.events);
  } else {
    oracle::DetectionHistogram direct = oracle::detection_histogram(p, post_detection_state(Channel::L2), options);
    notes << "no_detection = " << direct.no_detection << "\n";
    hist = std::move(direct.histogram);
    events = std::move(direct.events);
  }

  EngineColumns out;
  out.engine = Engine::Mc;
  out.t = grid;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out.p_L2L1.push_back(hist.n_runs ? hist.density(Channel::L1, i, p.c) : nan);
    out.p_L2L2.push_back(hist.n_runs ? hist.density(Channel::L2, i, p.c) : nan);
    out.p_L2N.push_back(hist.n_runs ? hist.density(Channel::N, i, p.c) : nan);
  }
  out.visibility = envelope_visibility(p, grid, out.p_L2L1, notes);
  return out;
}

struct Deviation {
  double max_abs = 0.0;
  double mean_abs = 0.0;
  std::size_t points = 0;
};

Deviation deviation(const std::vector<double>& a, const std::vector<double>& b) {
  Deviation d;
  double sum = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (!std::isfinite(a[i]) || !std::isfinite(b[i])) continue;
    const double diff = std::abs(a[i] - b[i]);
    d.max_abs = std::max(d.max_abs, diff);
    sum += diff;
    ++d.points;
  }
  d.mean_abs = d.points ? sum / static_cast<double>(d.points) : nan;
  if (!d.points) d.max_abs = nan;
  return d;
}

}  // namespace

std::vector<Engine> selected_engines(const ScenarioConfig& config) {
  switch (config.engine) {
    case EngineChoice::Analytic: return {Engine::Analytic};
    case EngineChoice::Ode: return {Engine::Ode};
    case EngineChoice::Mc: return {Engine::Mc};
    case EngineChoice::All: return {Engine::Analytic, Engine::Ode, Engine::Mc};
  }
  return {};
}

RunProducts compute(const ScenarioConfig& config) {
  const std::vector<double> grid = uniform_grid(config.t_max, config.n_steps);
  RunProducts products;
  std::ostringstream notes;
  notes.precision(10);
  for (Engine engine : selected_engines(config)) {
    switch (engine) {
      case Engine::Analytic: products.columns.push_back(analytic_columns(config, grid)); break;
      case Engine::Ode: products.columns.push_back(ode_columns(config, grid, notes)); break;
      case Engine::Mc: products.columns.push_back(mc_columns(config, grid, products.events, notes)); break;
    }
  }
  products.diagnostics = notes.str();
  return products;
}

std::string format_csv(const ScenarioConfig& config, const std::vector<EngineColumns>& columns) {
  const double gn = config.params.gamma_N;
  const double t_scale = config.normalized ? gn : 1.0;
  const double p_scale = config.normalized ? config.params.c / gn : 1.0;
  std::string out = "t,p_L2L1,p_L2L2,p_L2N,visibility,engine\n";
  for (const auto& col : columns) {
    const std::string_view name = to_string(col.engine);
    for (std::size_t i = 0; i < col.t.size(); ++i) {
      out += format_double(col.t[i] * t_scale);
      out += ',';
      out += format_double(col.p_L2L1[i] * p_scale);
      out += ',';
      out += format_double(col.p_L2L2[i] * p_scale);
      out += ',';
      out += format_double(col.p_L2N[i] * p_scale);
      out += ',';
      out += format_double(col.visibility[i]);
      out += ',';
      out += name;
      out += '\n';
    }
  }
  return out;
}

std::string format_events(const std::vector<std::vector<DetectionEvent>>& events) {
  std::string out = "trajectory_id,first_channel,first_time,second_channel,second_time\n";
  for (std::size_t id = 0; id < events.size(); ++id) {
    const auto& ev = events[id];
    out += std::to_string(id);
    for (std::size_t k = 0; k < 2; ++k) {
      out += ',';
      if (k < ev.size()) out += to_string(ev[k].channel);
      out += ',';
      if (k < ev.size()) out += format_double(ev[k].time);
    }
    out += '\n';
  }
  return out;
}

std::string format_report(const ScenarioConfig& config, const std::vector<EngineColumns>& columns) {
  std::ostringstream out;
  out << "[run]\n";
  out << "engines =";
  for (const auto& col : columns) out << ' ' << to_string(col.engine);
  out << "\ninitial = " << to_string(config.initial) << "\n";
  out << "seed = " << config.seed << "\n";
  out << "generator = " << oracle::generator_name << "\n";
  out << "n_traj = " << config.n_traj << "\n";
  out << "n_steps = " << config.n_steps << "\n";
  out << "t_max = " << format_double(config.t_max) << "\n";
  out << "units = 1/length\n";
  for (std::size_t a = 0; a < columns.size(); ++a) {
    for (std::size_t b = a + 1; b < columns.size(); ++b) {
      const auto& x = columns[a];
      const auto& y = columns[b];
      out << "\n[" << to_string(x.engine) << "_vs_" << to_string(y.engine) << "]\n";
      const std::pair<std::string_view, Deviation> rows[] = {
          {"p_L2L1", deviation(x.p_L2L1, y.p_L2L1)},
          {"p_L2L2", deviation(x.p_L2L2, y.p_L2L2)},
          {"p_L2N", deviation(x.p_L2N, y.p_L2N)},
          {"visibility", deviation(x.visibility, y.visibility)},
      };
      for (const auto& [name, d] : rows) {
        out << name << ".max_abs = " << format_double(d.max_abs) << "\n";
        out << name << ".mean_abs = " << format_double(d.mean_abs) << "\n";
        out << name << ".points = " << d.points << "\n";
      }
    }
  }
  return out.str();
}

std::filesystem::path report_path(const ScenarioConfig& config) {
  if (!config.report.empty()) return config.report;
  std::filesystem::path path = config.out;
  path.replace_extension(".report.txt");
  return path;
}

void write_file_atomically(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
    if (!file) throw OutputError("cannot open " + tmp.string() + " for writing");
    file.write(content.data(), static_cast<std::streamsize>(content.size()));
    file.flush();
    if (!file) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw OutputError("failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw OutputError("cannot move output into place at " + path.string() + ": " + ec.message());
  }
}

int run(const ScenarioConfig& config, std::ostream& log, bool verbose) {
  try {
    config.validate();
  } catch (const ConfigError& e) {
    log << e.what() << "\n";
    return exit_code::config;
  }

  RunProducts products;
  try {
    products = compute(config);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return exit_code::runtime;
  }
  if (verbose) log << products.diagnostics;

  try {
    write_file_atomically(config.out, format_csv(config, products.columns));
    if (!config.events.empty()) write_file_atomically(config.events, format_events(products.events));
    if (config.engine == EngineChoice::All) {
      write_file_atomically(report_path(config), format_report(config, products.columns));
    }
  } catch (const OutputError& e) {
    log << "output error: " << e.what() << "\n";
    return exit_code::output;
  }
  return exit_code::ok;
}

}  // namespace beatsim::cli
