#pragma once

#include <span>
#include <vector>

#include "beatsim/model.hpp"

namespace beatsim::analytic {

/// One two-level emitter radiating into a single 1-D continuum.
struct SingleEmitterParams {
  double omega0 = 0.0;
  double gamma = 1.0;
  double c = 1.0;

  void validate() const;
};

/// (e^z - 1) / z, accurate near z = 0 and for purely imaginary z.
cplx expm1_over_z(cplx z);

/// Integral of e^{-rate s} ds over [0, t], for complex rate (including 0).
cplx decay_integral(cplx rate, double t);

/// Excited-state amplitude e^{-i omega0 t - gamma t / 2}. Requires t >= 0.
cplx single_excited_amplitude(const SingleEmitterParams& p, double t);

/// One-photon amplitude in mode k at time t:
///   sqrt(c gamma / 2 pi) e^{-ikct} (1 - e^{(i(kc - omega0) - gamma/2) t}) / (kc - omega0 + i gamma/2)
/// Regular everywhere, including gamma = 0 on resonance.
cplx single_k_amplitude(const SingleEmitterParams& p, double k, double t);

/// Real-space photon amplitude, -i sqrt(gamma/c) e^{(gamma/2 + i omega0)(r/c - t)}
/// for 0 < r < ct and zero elsewhere.
cplx single_realspace_amplitude(const SingleEmitterParams& p, double r, double t);

/// State at time t after a detection in L2 at t = 0 (initial state |eg>).
///
/// Field amplitudes are sampled on a grid of retarded times
/// tau = r/c - t; they vanish outside -t < tau < 0. a_Lminus carries the
/// phase that makes a_L1 = (a_Lplus + a_Lminus)/sqrt(2) the amplitude of
/// emitter 1 at emission time, which is what the L2 -> L1 correlation
/// measures.
struct ConditionalAmplitudes {
  double t = 0.0;
  cplx a_1plus;
  cplx a_1minus;
  std::vector<double> tau;
  std::vector<cplx> a_N;
  std::vector<cplx> a_Lplus;
  std::vector<cplx> a_Lminus;
};

ConditionalAmplitudes conditional_amplitudes(const ModelParams& p, double t,
                                             std::span<const double> tau_grid);

/// Single-point evaluation of the conditional field amplitude in a
/// symmetrized channel.
cplx conditional_field(const ModelParams& p, SymChannel ch, double tau, double t);

/// System state (Product basis) at time t starting from |eg>.
SystemState conditional_system_state(const ModelParams& p, double t);

// Conditional detection densities [1/length] at delay t after a first
// detection. All require t >= 0.
double p_L2_L1(const ModelParams& p, double t);
double p_L2_L2(const ModelParams& p, double t);
double p_L2_N(const ModelParams& p, double t);
/// After an N detection the system is in |1+>: each local channel sees
/// (gamma_L / 2c) e^{-(gamma_L + gamma_N) t}.
double p_N_L(const ModelParams& p, double t);
double p_N_N(const ModelParams& p, double t);

/// Beat visibility A/M = 1 / cosh(gamma_N t / 2).
double visibility(const ModelParams& p, double t);
/// The same quantity written as 2 e^{gamma_N t/2} / (1 + e^{gamma_N t}).
double visibility_exponential_form(const ModelParams& p, double t);

/// Probability bookkeeping at time t after an L2 detection.
struct RadiatedProbabilities {
  double L1 = 0.0;
  double L2 = 0.0;
  double N = 0.0;
};

/// Probability already radiated into each channel by time t, i.e.
/// c * integral of the conditional densities over [0, t].
RadiatedProbabilities radiated_after_L2(const ModelParams& p, double t);

/// |a_1plus|^2 + |a_1minus|^2.
double surviving_after_L2(const ModelParams& p, double t);

}  // namespace beatsim::analytic
