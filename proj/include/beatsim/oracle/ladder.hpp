#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "beatsim/analytic.hpp"
#include "beatsim/model.hpp"

namespace beatsim::oracle {

/// Evenly spaced field modes of one channel, omega_m = omega_min + (m + 1/2) * spacing.
/// The per-mode coupling follows from rate = 2 pi g^2 rho with
/// rho = n_modes / (omega_max - omega_min).
struct ModeLadder {
  Channel channel = Channel::L1;
  double omega_min = -1.0;
  double omega_max = 1.0;
  int n_modes = 2;
  double rate = 0.0;

  [[nodiscard]] double spacing() const { return (omega_max - omega_min) / n_modes; }
  [[nodiscard]] double density() const { return n_modes / (omega_max - omega_min); }
  [[nodiscard]] double coupling() const;
  [[nodiscard]] double frequency(int m) const { return omega_min + (m + 0.5) * spacing(); }
  /// Rate implied by the discretization, 2 pi g^2 rho.
  [[nodiscard]] double derived_rate() const;
};

/// Emitter pair plus the field ladders it radiates into. Each ladder couples
/// through jump_operator(ladder.channel).
struct WwSystem {
  double E0 = 0.0;
  double W = 0.0;
  std::vector<ModeLadder> ladders;
};

struct LadderSettings {
  int n_modes = 4096;
  /// Half-width of every window around E0; <= 0 selects default_half_width.
  double half_width = 0.0;
  /// Integration step; <= 0 selects default_dt.
  double dt = 0.0;
};

/// 500 (gamma_L + gamma_N) + 25 |delta_omega|. The finite band renormalizes
/// decay amplitudes by roughly rate / (pi * half_width), so the window must
/// be wide compared to the rates, not just to the beat frequency.
double default_half_width(const ModelParams& p);

/// Ladders for every channel with a nonzero rate, centered on E0.
WwSystem make_system(const ModelParams& p, const LadderSettings& settings = {});

/// A single emitter as emitter 1 of the pair with only an L1 ladder.
WwSystem make_single_emitter_system(const analytic::SingleEmitterParams& p,
                                    const LadderSettings& settings = {});

/// Largest angular frequency in the frame rotating at E0.
double max_frequency(const WwSystem& sys);
/// 0.08 / max_frequency(sys).
double default_dt(const WwSystem& sys);

/// Throws std::invalid_argument when a ladder is degenerate, misses a
/// system resonance, is narrower than 50 max(total rate, |delta_omega|),
/// or when dt * max_frequency > 0.1.
void validate(const WwSystem& sys, double dt);

/// System amplitudes (lab frame, Product basis) plus one-photon mode
/// amplitudes per ladder (lab frame).
struct FullState {
  double t = 0.0;
  SystemState system;
  std::vector<std::vector<cplx>> modes;

  [[nodiscard]] double norm2() const;
};

struct WwSample {
  double t = 0.0;
  SystemState system;
  /// Photon probability per physical channel, indexed by Channel.
  std::array<double, 3> photons{};
  double norm2 = 0.0;
};

struct WwResult {
  std::vector<WwSample> samples;
  FullState final_state;
  double dt = 0.0;
  long steps = 0;
  double max_norm_drift = 0.0;
};

/// Fixed-step RK4 integration of the one-excitation sector in the frame
/// rotating at E0. The initial state must have no |ee> component. Samples
/// are taken exactly at `sample_times` (ascending, >= 0); each interval is
/// split into equal steps no longer than dt.
WwResult integrate_ww(const WwSystem& sys, const SystemState& initial,
                      std::span<const double> sample_times, double dt);

/// Structured text summary of a run for verbose reporting.
std::string describe(const WwSystem& sys, const WwResult& result);

/// Detection density (1/length) in `ch` implied by the system amplitudes,
/// (rate / c) |J_ch psi|^2.
double readout_density(const ModelParams& p, const SystemState& state, Channel ch);

}  // namespace beatsim::oracle
