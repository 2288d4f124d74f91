#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "beatsim/analytic.hpp"
#include "beatsim/model.hpp"
#include "beatsim/oracle/jumps.hpp"
#include "beatsim/oracle/ladder.hpp"
#include "beatsim/series.hpp"

namespace beatsim {

/// Renormalized system state after a photon is registered in `ch`.
/// Throws std::domain_error when the detection has zero probability.
SystemState project_after_detection(const SystemState& state, Channel ch);

/// State left behind when the first photon of the |ee> cascade lands in `ch`.
SystemState post_detection_state(Channel first);

/// Conditional densities for all nine (first, second) channel pairs.
struct CorrelationTable {
  ModelParams params;
  Engine engine = Engine::Analytic;
  std::vector<double> t_grid;
  std::array<std::array<CorrelationSeries, 3>, 3> series;

  [[nodiscard]] const CorrelationSeries& at(Channel first, Channel second) const {
    return series[static_cast<std::size_t>(first)][static_cast<std::size_t>(second)];
  }
};

struct TableOptions {
  oracle::LadderSettings ode;
  /// Monte Carlo trajectory budget; the mc engine rejects 0.
  std::uint64_t n_traj = 0;
  std::uint64_t master_seed = 1;
  /// true: one |ee> cascade run feeds every row. false: each row is sampled
  /// directly from its post-detection state.
  bool mc_cascade = true;
  unsigned n_threads = 1;
  /// Detector radius shared by both detectors.
  double detector_radius = 0.0;
};

/// Histogram edges for a uniform grid: bin i is centered on t_grid[i], the
/// first bin clipped at zero delay.
std::vector<double> centered_bin_edges(std::span<const double> t_grid);

/// Analytic rows come from the closed forms plus 1<->2 relabeling, ode rows
/// from integrate_ww started in each post-detection state, mc rows from
/// histograms whose bins are centered on the (uniform) grid points.
CorrelationTable build_table(const ModelParams& p, std::span<const double> t_grid, Engine engine,
                             const TableOptions& options = {});

/// Envelope-based A/M extracted from a sampled local-local series.
struct VisibilityExtraction {
  std::vector<double> extremum_times;
  std::vector<bool> extremum_is_max;
  /// A/M at each extremum where both envelopes are defined (NaN otherwise).
  std::vector<double> extremum_visibility;
  /// A/M on the series grid; NaN outside the span covered by both envelopes.
  std::vector<double> values;
};

/// Divides out (gamma_L / 4c) e^{-gamma_L t}, locates interior extrema by a
/// parabola through each extremal triple, and interpolates the upper and
/// lower envelopes linearly between extrema of the same kind.
/// Throws std::domain_error with fewer than two extrema.
VisibilityExtraction extract_visibility(const ModelParams& p, std::span<const double> t_grid,
                                        std::span<const double> values);

/// A/M for a local-local pair: the closed form for analytic tables, envelope
/// extraction otherwise. Throws std::invalid_argument for pairs involving N.
std::vector<double> visibility_series(const CorrelationTable& table, Channel first, Channel second);

struct NormalizationLedger {
  double system = 0.0;
  analytic::RadiatedProbabilities radiated;
  double total = 0.0;
};

/// Closed-form bookkeeping after an L2 detection at t = 0.
NormalizationLedger normalization_ledger(const ModelParams& p, double t);

/// The same bookkeeping read off a mode-ladder run: system norm from the
/// emitter amplitudes, radiated terms from the ladder populations.
NormalizationLedger normalization_ledger_ode(const ModelParams& p, double t,
                                             const oracle::LadderSettings& settings = {});

}  // namespace beatsim
