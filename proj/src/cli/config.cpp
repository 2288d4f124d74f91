#include "beatsim/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace beatsim::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Drops a trailing "# ..." or "; ..." comment that follows whitespace.
std::string_view strip_comment(std::string_view line) {
  for (std::size_t i = 1; i < line.size(); ++i) {
    if ((line[i] == '#' || line[i] == ';') && (line[i - 1] == ' ' || line[i - 1] == '\t')) {
      return line.substr(0, i);
    }
  }
  return line;
}

std::string field_name(std::string_view section, std::string_view key) {
  return "[" + std::string(section) + "] " + std::string(key);
}

[[noreturn]] void fail(std::string_view section, std::string_view key, int line, const std::string& why) {
  throw ConfigError(field_name(section, key), line, why);
}

double to_double(std::string_view section, std::string_view key, std::string_view value, int line) {
  double out = 0.0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
    fail(section, key, line, "expected a finite number, got '" + std::string(value) + "'");
  }
  return out;
}

std::uint64_t to_uint(std::string_view section, std::string_view key, std::string_view value, int line) {
  std::uint64_t out = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    fail(section, key, line, "expected a non-negative integer, got '" + std::string(value) + "'");
  }
  return out;
}

int to_int(std::string_view section, std::string_view key, std::string_view value, int line) {
  int out = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    fail(section, key, line, "expected an integer, got '" + std::string(value) + "'");
  }
  return out;
}

bool to_bool(std::string_view section, std::string_view key, std::string_view value, int line) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  fail(section, key, line, "expected true or false, got '" + std::string(value) + "'");
}

std::string number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

std::string_view to_string(EngineChoice engine) {
  switch (engine) {
    case EngineChoice::Analytic: return "analytic";
    case EngineChoice::Ode: return "ode";
    case EngineChoice::Mc: return "mc";
    case EngineChoice::All: return "all";
  }
  return "?";
}

std::string_view to_string(InitialCondition initial) {
  return initial == InitialCondition::eg ? "eg" : "ee";
}

ConfigError::ConfigError(std::string field, int line, const std::string& what)
    : std::runtime_error([&] {
        std::ostringstream msg;
        msg << "config error";
        if (line > 0) msg << " at line " << line;
        if (!field.empty()) msg << " (" << field << ")";
        msg << ": " << what;
        return msg.str();
      }()),
      field_(std::move(field)),
      line_(line) {}

void apply_setting(ScenarioConfig& config, std::string_view section, std::string_view key,
                   std::string_view value, int line) {
  auto& p = config.params;
  if (section == "params") {
    if (key == "E0") p.E0 = to_double(section, key, value, line);
    else if (key == "W") p.W = to_double(section, key, value, line);
    else if (key == "delta_omega") p.W = 0.5 * to_double(section, key, value, line);
    else if (key == "gamma_L") p.gamma_L = to_double(section, key, value, line);
    else if (key == "gamma_N") p.gamma_N = to_double(section, key, value, line);
    else if (key == "c") p.c = to_double(section, key, value, line);
    else fail(section, key, line, "unknown key");
  } else if (section == "engine") {
    if (key == "engine") {
      if (value == "analytic") config.engine = EngineChoice::Analytic;
      else if (value == "ode") config.engine = EngineChoice::Ode;
      else if (value == "mc") config.engine = EngineChoice::Mc;
      else if (value == "all") config.engine = EngineChoice::All;
      else fail(section, key, line, "expected analytic, ode, mc or all, got '" + std::string(value) + "'");
    } else if (key == "t_max") {
      config.t_max = to_double(section, key, value, line);
    } else if (key == "n_steps") {
      config.n_steps = to_int(section, key, value, line);
    } else if (key == "initial") {
      if (value == "eg") config.initial = InitialCondition::eg;
      else if (value == "ee") config.initial = InitialCondition::ee;
      else fail(section, key, line, "expected eg or ee, got '" + std::string(value) + "'");
    } else if (key == "detector_radius") {
      config.detector_radius = to_double(section, key, value, line);
    } else {
      fail(section, key, line, "unknown key");
    }
  } else if (section == "ode") {
    if (key == "n_modes") config.ode.n_modes = to_int(section, key, value, line);
    else if (key == "half_width") config.ode.half_width = to_double(section, key, value, line);
    else if (key == "dt") config.ode.dt = to_double(section, key, value, line);
    else fail(section, key, line, "unknown key");
  } else if (section == "mc") {
    if (key == "n_traj") config.n_traj = to_uint(section, key, value, line);
    else if (key == "seed") config.seed = to_uint(section, key, value, line);
    else if (key == "threads") config.threads = static_cast<unsigned>(to_uint(section, key, value, line));
    else fail(section, key, line, "unknown key");
  } else if (section == "output") {
    if (key == "out") config.out = std::string(value);
    else if (key == "events") config.events = std::string(value);
    else if (key == "report") config.report = std::string(value);
    else if (key == "normalized") config.normalized = to_bool(section, key, value, line);
    else fail(section, key, line, "unknown key");
  } else {
    fail(section, key, line, "unknown section");
  }
}

void apply_assignment(ScenarioConfig& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string_view::npos || dot == std::string_view::npos || dot > eq) {
    throw ConfigError("", 0, "expected section.key=value, got '" + std::string(assignment) + "'");
  }
  apply_setting(config, trim(assignment.substr(0, dot)), trim(assignment.substr(dot + 1, eq - dot - 1)),
                trim(assignment.substr(eq + 1)));
}

ScenarioConfig parse_config(std::string_view text, ScenarioConfig base) {
  std::string section;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = trim(strip_comment(text.substr(0, nl)));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("", line_no, "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("", line_no, "expected key = value, got '" + std::string(line) + "'");
    }
    if (section.empty()) throw ConfigError("", line_no, "key outside of any [section]");
    apply_setting(base, section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no);
  }
  return base;
}

void ScenarioConfig::validate() const {
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("[params]", 0, e.what());
  }
  if (!(t_max > 0.0)) throw ConfigError("[engine] t_max", 0, "must be > 0");
  if (n_steps < 2) throw ConfigError("[engine] n_steps", 0, "must be >= 2");
  if (detector_radius < 0.0) throw ConfigError("[engine] detector_radius", 0, "must be >= 0");
  if (ode.n_modes < 2) throw ConfigError("[ode] n_modes", 0, "must be >= 2");
  if (ode.half_width < 0.0) throw ConfigError("[ode] half_width", 0, "must be >= 0 (0 = default)");
  if (ode.dt < 0.0) throw ConfigError("[ode] dt", 0, "must be >= 0 (0 = default)");
  const bool uses_mc = engine == EngineChoice::Mc || engine == EngineChoice::All;
  if (uses_mc && n_traj < 1) throw ConfigError("[mc] n_traj", 0, "must be >= 1 when the mc engine runs");
  if (uses_mc && initial == InitialCondition::ee && n_traj < 1000) {
    throw ConfigError("[mc] n_traj", 0, "the |ee> cascade needs at least 1000 trajectories");
  }
  if (threads < 1) throw ConfigError("[mc] threads", 0, "must be >= 1");
  if (out.empty()) throw ConfigError("[output] out", 0, "must not be empty");
  if (!events.empty() && !uses_mc) {
    throw ConfigError("[output] events", 0, "event files need the mc engine (mc or all)");
  }
  if (normalized && !(params.gamma_N > 0.0)) {
    throw ConfigError("[output] normalized", 0, "normalized units need gamma_N > 0");
  }
}

std::string dump_config(const ScenarioConfig& config) {
  const auto& p = config.params;
  std::ostringstream out;
  out << "[params]\n";
  out << "E0 = " << number(p.E0) << "\n";
  out << "W = " << number(p.W) << "\n";
  out << "gamma_L = " << number(p.gamma_L) << "\n";
  out << "gamma_N = " << number(p.gamma_N) << "\n";
  out << "c = " << number(p.c) << "\n";
  out << "\n[engine]\n";
  out << "engine = " << to_string(config.engine) << "\n";
  out << "t_max = " << number(config.t_max) << "\n";
  out << "n_steps = " << config.n_steps << "\n";
  out << "initial = " << to_string(config.initial) << "\n";
  out << "detector_radius = " << number(config.detector_radius) << "\n";
  out << "\n[ode]\n";
  out << "n_modes = " << config.ode.n_modes << "\n";
  out << "half_width = " << number(config.ode.half_width) << "\n";
  out << "dt = " << number(config.ode.dt) << "\n";
  out << "\n[mc]\n";
  out << "n_traj = " << config.n_traj << "\n";
  out << "seed = " << config.seed << "\n";
  out << "threads = " << config.threads << "\n";
  out << "\n[output]\n";
  out << "out = " << config.out << "\n";
  out << "events = " << config.events << "\n";
  out << "report = " << config.report << "\n";
  out << "normalized = " << (config.normalized ? "true" : "false") << "\n";
  return out.str();
}

ScenarioConfig figure1_config() {
  ScenarioConfig config;
  config.params = ModelParams::from_beat(8.0, 0.05, 1.0);
  config.t_max = 6.0 / config.params.gamma_N;
  config.n_steps = 1201;
  config.initial = InitialCondition::eg;
  config.out = "figure1.csv";
  return config;
}

}  // namespace beatsim::cli
