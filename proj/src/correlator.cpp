#include "beatsim/correlator.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>

namespace beatsim {

namespace {

const double nan = std::numeric_limits<double>::quiet_NaN();

bool is_local(Channel ch) { return ch != Channel::N; }

CorrelationSeries make_series(const ModelParams& p, Engine engine, Channel first, Channel second,
                              std::span<const double> t_grid) {
  CorrelationSeries s;
  s.first = first;
  s.second = second;
  s.engine = engine;
  s.params = p;
  s.t_grid.assign(t_grid.begin(), t_grid.end());
  s.values.resize(t_grid.size());
  return s;
}

double analytic_density(const ModelParams& p, Channel first, Channel second, double t) {
  if (first == Channel::N) {
    return second == Channel::N ? analytic::p_N_N(p, t) : analytic::p_N_L(p, t);
  }
  // Rows conditioned on L1 are the L2 rows with emitters relabeled.
  const Channel second_seen_from_L2 = first == Channel::L2 ? second : relabel(second);
  switch (second_seen_from_L2) {
    case Channel::L1: return analytic::p_L2_L1(p, t);
    case Channel::L2: return analytic::p_L2_L2(p, t);
    case Channel::N: return analytic::p_L2_N(p, t);
  }
  return 0.0;
}

std::array<std::vector<double>, 3> ode_row(const ModelParams& p, Channel first,
                                           std::span<const double> t_grid,
                                           const oracle::LadderSettings& settings) {
  const oracle::WwSystem sys = oracle::make_system(p, settings);
  const double dt = settings.dt > 0.0 ? settings.dt : oracle::default_dt(sys);
  const oracle::WwResult run = oracle::integrate_ww(sys, post_detection_state(first), t_grid, dt);
  std::array<std::vector<double>, 3> row;
  for (Channel second : all_channels) {
    auto& out = row[static_cast<std::size_t>(second)];
    out.reserve(run.samples.size());
    for (const auto& sample : run.samples) {
      out.push_back(oracle::readout_density(p, sample.system, second));
    }
  }
  return row;
}

double interpolate(const std::vector<std::pair<double, double>>& points, double t) {
  if (points.empty() || t < points.front().first || t > points.back().first) return nan;
  if (points.size() == 1) return points.front().second;
  auto it = std::lower_bound(points.begin(), points.end(), t,
                             [](const auto& pt, double value) { return pt.first < value; });
  if (it == points.begin()) return it->second;
  const auto& [t1, v1] = *it;
  const auto& [t0, v0] = *(it - 1);
  if (t1 == t0) return v1;
  return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
}

}  // namespace

std::vector<double> centered_bin_edges(std::span<const double> t_grid) {
  require_ascending_grid(t_grid, "t_grid");
  if (t_grid.size() < 2 || !is_uniform(t_grid)) {
    throw std::invalid_argument("centered_bin_edges: needs a uniform grid of at least two points");
  }
  const double h = (t_grid.back() - t_grid.front()) / static_cast<double>(t_grid.size() - 1);
  std::vector<double> edges;
  edges.reserve(t_grid.size() + 1);
  edges.push_back(std::max(0.0, t_grid.front() - 0.5 * h));
  for (double t : t_grid) edges.push_back(t + 0.5 * h);
  return edges;
}

SystemState project_after_detection(const SystemState& state, Channel ch) {
  const SystemState s = state.basis == Basis::Product ? state : to_product_basis(state);
  const Vector4c projected = jump_operator(ch) * s.amplitudes;
  const double n = projected.norm();
  if (!(n > 1e-15 * std::max(1.0, s.norm()))) {
    throw std::domain_error("project_after_detection: detection in " + std::string(to_string(ch)) +
                            " has zero probability for this state");
  }
  SystemState out;
  out.amplitudes = projected / n;
  out.basis = Basis::Product;
  return out;
}

SystemState post_detection_state(Channel first) {
  return project_after_detection(SystemState::product(1.0, 0.0, 0.0, 0.0), first);
}

CorrelationTable build_table(const ModelParams& p, std::span<const double> t_grid, Engine engine,
                             const TableOptions& options) {
  p.validate();
  require_ascending_grid(t_grid, "build_table");
  if (t_grid.front() < 0.0) throw std::invalid_argument("build_table: negative delay in grid");

  CorrelationTable table;
  table.params = p;
  table.engine = engine;
  table.t_grid.assign(t_grid.begin(), t_grid.end());
  for (Channel first : all_channels) {
    for (Channel second : all_channels) {
      table.series[static_cast<std::size_t>(first)][static_cast<std::size_t>(second)] =
          make_series(p, engine, first, second, t_grid);
    }
  }
  auto slot = [&](Channel first, Channel second) -> std::vector<double>& {
    return table.series[static_cast<std::size_t>(first)][static_cast<std::size_t>(second)].values;
  };

  switch (engine) {
    case Engine::Analytic: {
      for (Channel first : all_channels) {
        for (Channel second : all_channels) {
          auto& values = slot(first, second);
          for (std::size_t i = 0; i < t_grid.size(); ++i) {
            values[i] = analytic_density(p, first, second, t_grid[i]);
          }
        }
      }
      break;
    }
    case Engine::Ode: {
      std::array<std::array<std::vector<double>, 3>, 3> rows;
      if (options.n_threads > 1) {
        std::array<std::future<std::array<std::vector<double>, 3>>, 3> pending;
        for (Channel first : all_channels) {
          pending[static_cast<std::size_t>(first)] = std::async(
              std::launch::async, ode_row, std::cref(p), first, t_grid, std::cref(options.ode));
        }
        for (std::size_t f = 0; f < 3; ++f) rows[f] = pending[f].get();
      } else {
        for (Channel first : all_channels) {
          rows[static_cast<std::size_t>(first)] = ode_row(p, first, t_grid, options.ode);
        }
      }
      for (Channel first : all_channels) {
        for (Channel second : all_channels) {
          slot(first, second) = std::move(rows[static_cast<std::size_t>(first)][static_cast<std::size_t>(second)]);
        }
      }
      break;
    }
    case Engine::Mc: {
      if (options.n_traj == 0) {
        throw std::invalid_argument("build_table: the mc engine needs a trajectory budget (n_traj > 0)");
      }
      if (t_grid.size() < 2 || !is_uniform(t_grid, 1e-6)) {
        throw std::invalid_argument("build_table: the mc engine needs a uniform grid of >= 2 points");
      }
      oracle::MonteCarloOptions mc;
      mc.n_traj = options.n_traj;
      mc.master_seed = options.master_seed;
      mc.edges = centered_bin_edges(t_grid);
      mc.n_threads = options.n_threads;
      mc.jump.detector_radius = options.detector_radius;
      if (options.mc_cascade) {
        const oracle::CascadeHistogram hist = oracle::cascade_histogram(p, mc);
        for (Channel first : all_channels) {
          const auto& cond = hist.conditional[static_cast<std::size_t>(first)];
          for (Channel second : all_channels) {
            auto& values = slot(first, second);
            for (std::size_t i = 0; i < t_grid.size(); ++i) values[i] = cond.density(second, i, p.c);
          }
        }
      } else {
        for (Channel first : all_channels) {
          oracle::MonteCarloOptions row = mc;
          row.master_seed = oracle::derive_seed(options.master_seed, static_cast<std::uint64_t>(first));
          const oracle::DetectionHistogram hist =
              oracle::detection_histogram(p, post_detection_state(first), row);
          for (Channel second : all_channels) {
            auto& values = slot(first, second);
            for (std::size_t i = 0; i < t_grid.size(); ++i) {
              values[i] = hist.histogram.density(second, i, p.c);
            }
          }
        }
      }
      break;
    }
  }
  return table;
}

VisibilityExtraction extract_visibility(const ModelParams& p, std::span<const double> t_grid,
                                        std::span<const double> values) {
  if (t_grid.size() != values.size()) {
    throw std::invalid_argument("extract_visibility: grid and values differ in length");
  }
  if (!(p.gamma_L > 0.0)) {
    throw std::domain_error("extract_visibility: gamma_L = 0 leaves no local signal to detrend");
  }
  const std::size_t n = t_grid.size();
  std::vector<double> b(n);
  for (std::size_t i = 0; i < n; ++i) {
    b[i] = values[i] / (p.gamma_L / (4.0 * p.c) * std::exp(-p.gamma_L * t_grid[i]));
  }

  VisibilityExtraction out;
  std::vector<std::pair<double, double>> maxima;
  std::vector<std::pair<double, double>> minima;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const bool is_max = b[i] > b[i - 1] && b[i] >= b[i + 1];
    const bool is_min = b[i] < b[i - 1] && b[i] <= b[i + 1];
    if (!is_max && !is_min) continue;
    const double h1 = t_grid[i] - t_grid[i - 1];
    const double h2 = t_grid[i + 1] - t_grid[i];
    const double d1 = (b[i] - b[i - 1]) / h1;
    const double d2 = (b[i + 1] - b[i]) / h2;
    const double a = (d2 - d1) / (h1 + h2);
    double t_ext = t_grid[i];
    double v_ext = b[i];
    if (a != 0.0) {
      const double slope = d1 + a * h1;
      const double shift = std::clamp(-slope / (2.0 * a), -h1, h2);
      t_ext = t_grid[i] + shift;
      v_ext = b[i] + slope * shift + a * shift * shift;
    }
    out.extremum_times.push_back(t_ext);
    out.extremum_is_max.push_back(is_max);
    (is_max ? maxima : minima).emplace_back(t_ext, v_ext);
  }
  if (out.extremum_times.size() < 2) {
    throw std::domain_error(
        "extract_visibility: fewer than 2 extrema in the window; increase delta_omega * t_max");
  }

  auto ratio = [](double upper, double lower) {
    if (std::isnan(upper) || std::isnan(lower) || !(upper + lower > 0.0)) return nan;
    return (upper - lower) / (upper + lower);
  };
  std::size_t k_max = 0;
  std::size_t k_min = 0;
  for (std::size_t e = 0; e < out.extremum_times.size(); ++e) {
    const double t = out.extremum_times[e];
    if (out.extremum_is_max[e]) {
      out.extremum_visibility.push_back(ratio(maxima[k_max++].second, interpolate(minima, t)));
    } else {
      out.extremum_visibility.push_back(ratio(interpolate(maxima, t), minima[k_min++].second));
    }
  }
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.values[i] = ratio(interpolate(maxima, t_grid[i]), interpolate(minima, t_grid[i]));
  }
  return out;
}

std::vector<double> visibility_series(const CorrelationTable& table, Channel first, Channel second) {
  if (!is_local(first) || !is_local(second)) {
    throw std::invalid_argument("visibility_series: only local-local pairs carry beats");
  }
  if (table.engine == Engine::Analytic) {
    std::vector<double> out;
    out.reserve(table.t_grid.size());
    for (double t : table.t_grid) out.push_back(analytic::visibility(table.params, t));
    return out;
  }
  const auto& s = table.at(first, second);
  return extract_visibility(table.params, s.t_grid, s.values).values;
}

NormalizationLedger normalization_ledger(const ModelParams& p, double t) {
  NormalizationLedger ledger;
  ledger.system = analytic::surviving_after_L2(p, t);
  ledger.radiated = analytic::radiated_after_L2(p, t);
  ledger.total = ledger.system + ledger.radiated.L1 + ledger.radiated.L2 + ledger.radiated.N;
  return ledger;
}

NormalizationLedger normalization_ledger_ode(const ModelParams& p, double t,
                                             const oracle::LadderSettings& settings) {
  if (!(t >= 0.0)) throw std::invalid_argument("normalization_ledger_ode: t must be >= 0");
  const oracle::WwSystem sys = oracle::make_system(p, settings);
  const double dt = settings.dt > 0.0 ? settings.dt : oracle::default_dt(sys);
  const std::array<double, 1> when{t};
  const oracle::WwResult run =
      oracle::integrate_ww(sys, post_detection_state(Channel::L2), when, dt);
  const oracle::WwSample& s = run.samples.back();
  NormalizationLedger ledger;
  ledger.system = s.system.norm2();
  ledger.radiated.L1 = s.photons[static_cast<std::size_t>(Channel::L1)];
  ledger.radiated.L2 = s.photons[static_cast<std::size_t>(Channel::L2)];
  ledger.radiated.N = s.photons[static_cast<std::size_t>(Channel::N)];
  ledger.total = s.norm2;
  return ledger;
}

}  // namespace beatsim
