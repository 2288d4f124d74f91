#include "beatsim/analytic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace beatsim::analytic {

namespace {

using namespace std::complex_literals;

const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

void require_nonnegative_time(double t, const char* what) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument(std::string(what) + ": time must be finite and >= 0");
  }
}

// e^{x+iy} - 1 without cancellation in either component.
cplx expm1_complex(cplx z) {
  const double x = z.real();
  const double y = z.imag();
  const double half_sin = std::sin(0.5 * y);
  const double re = std::expm1(x) * std::cos(y) - 2.0 * half_sin * half_sin;
  const double im = std::exp(x) * std::sin(y);
  return {re, im};
}

double bracket(const ModelParams& p, double t, double cross_sign) {
  const double half = std::exp(-0.5 * p.gamma_N * t);
  return 1.0 + cross_sign * 2.0 * half * std::cos(p.delta_omega() * t) + half * half;
}

}  // namespace

void SingleEmitterParams::validate() const {
  if (!std::isfinite(omega0) || !std::isfinite(gamma) || !std::isfinite(c)) {
    throw std::invalid_argument("SingleEmitterParams: non-finite field");
  }
  if (gamma < 0.0) throw std::invalid_argument("SingleEmitterParams.gamma must be >= 0");
  if (c <= 0.0) throw std::invalid_argument("SingleEmitterParams.c must be > 0");
}

cplx expm1_over_z(cplx z) {
  if (std::abs(z) < 1e-2) {
    // Horner form of 1 + z/2 + z^2/6 + z^3/24 + z^4/120 + z^5/720
    return 1.0 + z * (1.0 / 2 + z * (1.0 / 6 + z * (1.0 / 24 + z * (1.0 / 120 + z / 720.0))));
  }
  return expm1_complex(z) / z;
}

cplx decay_integral(cplx rate, double t) { return t * expm1_over_z(-rate * t); }

cplx single_excited_amplitude(const SingleEmitterParams& p, double t) {
  require_nonnegative_time(t, "single_excited_amplitude");
  return std::exp(cplx(-0.5 * p.gamma * t, -p.omega0 * t));
}

cplx single_k_amplitude(const SingleEmitterParams& p, double k, double t) {
  require_nonnegative_time(t, "single_k_amplitude");
  const double detuning = k * p.c - p.omega0;
  // (1 - e^{i t w}) / w with w = detuning + i gamma/2, written as
  // -i t phi(i t w) so that w -> 0 stays regular.
  const cplx w(detuning, 0.5 * p.gamma);
  const cplx ratio = -1i * t * expm1_over_z(1i * t * w);
  const double prefactor = std::sqrt(p.c * p.gamma / (2.0 * std::numbers::pi));
  return prefactor * std::exp(cplx(0.0, -k * p.c * t)) * ratio;
}

cplx single_realspace_amplitude(const SingleEmitterParams& p, double r, double t) {
  require_nonnegative_time(t, "single_realspace_amplitude");
  if (!(r > 0.0) || !(r < p.c * t)) return 0.0;
  const double tau = r / p.c - t;
  return -1i * std::sqrt(p.gamma / p.c) * std::exp(cplx(0.5 * p.gamma, p.omega0) * tau);
}

cplx conditional_field(const ModelParams& p, SymChannel ch, double tau, double t) {
  if (!(tau > -t) || !(tau < 0.0)) return 0.0;
  const cplx plus_rate(0.5 * (p.gamma_L + p.gamma_N), p.omega_plus());
  const cplx minus_rate(0.5 * p.gamma_L, p.omega_minus());
  switch (ch) {
    case SymChannel::Nplus:
      return -1i * std::sqrt(0.5 * p.gamma_N / p.c) * std::exp(plus_rate * tau);
    case SymChannel::Lplus:
      return -1i * std::sqrt(0.5 * p.gamma_L / p.c) * std::exp(plus_rate * tau);
    case SymChannel::Lminus:
      return -1i * std::sqrt(0.5 * p.gamma_L / p.c) * std::exp(minus_rate * tau);
  }
  return 0.0;
}

ConditionalAmplitudes conditional_amplitudes(const ModelParams& p, double t,
                                             std::span<const double> tau_grid) {
  require_nonnegative_time(t, "conditional_amplitudes");
  ConditionalAmplitudes out;
  out.t = t;
  out.a_1plus = inv_sqrt2 * std::exp(cplx(-0.5 * (p.gamma_L + p.gamma_N) * t, -p.omega_plus() * t));
  out.a_1minus = inv_sqrt2 * std::exp(cplx(-0.5 * p.gamma_L * t, -p.omega_minus() * t));
  out.tau.assign(tau_grid.begin(), tau_grid.end());
  out.a_N.reserve(tau_grid.size());
  out.a_Lplus.reserve(tau_grid.size());
  out.a_Lminus.reserve(tau_grid.size());
  for (double tau : tau_grid) {
    out.a_N.push_back(conditional_field(p, SymChannel::Nplus, tau, t));
    out.a_Lplus.push_back(conditional_field(p, SymChannel::Lplus, tau, t));
    out.a_Lminus.push_back(conditional_field(p, SymChannel::Lminus, tau, t));
  }
  return out;
}

SystemState conditional_system_state(const ModelParams& p, double t) {
  require_nonnegative_time(t, "conditional_system_state");
  const cplx a_plus =
      inv_sqrt2 * std::exp(cplx(-0.5 * (p.gamma_L + p.gamma_N) * t, -p.omega_plus() * t));
  const cplx a_minus = inv_sqrt2 * std::exp(cplx(-0.5 * p.gamma_L * t, -p.omega_minus() * t));
  return to_product_basis(SystemState::eigen(0.0, a_plus, a_minus, 0.0));
}

double p_L2_L1(const ModelParams& p, double t) {
  require_nonnegative_time(t, "p_L2_L1");
  return p.gamma_L / (4.0 * p.c) * std::exp(-p.gamma_L * t) * bracket(p, t, +1.0);
}

double p_L2_L2(const ModelParams& p, double t) {
  require_nonnegative_time(t, "p_L2_L2");
  // The bracket is (1 - e^{-gamma_N t/2})^2 + 2 e^{-gamma_N t/2} (1 - cos);
  // summing those keeps p(0) = 0 exact.
  const double half = std::exp(-0.5 * p.gamma_N * t);
  const double one_minus_half = -std::expm1(-0.5 * p.gamma_N * t);
  const double s = std::sin(0.5 * p.delta_omega() * t);
  const double b = one_minus_half * one_minus_half + 4.0 * half * s * s;
  return p.gamma_L / (4.0 * p.c) * std::exp(-p.gamma_L * t) * b;
}

double p_L2_N(const ModelParams& p, double t) {
  require_nonnegative_time(t, "p_L2_N");
  return p.gamma_N / (2.0 * p.c) * std::exp(-(p.gamma_L + p.gamma_N) * t);
}

double p_N_L(const ModelParams& p, double t) {
  require_nonnegative_time(t, "p_N_L");
  return p.gamma_L / (2.0 * p.c) * std::exp(-(p.gamma_L + p.gamma_N) * t);
}

double p_N_N(const ModelParams& p, double t) {
  require_nonnegative_time(t, "p_N_N");
  return p.gamma_N / p.c * std::exp(-(p.gamma_L + p.gamma_N) * t);
}

double visibility(const ModelParams& p, double t) {
  require_nonnegative_time(t, "visibility");
  return 1.0 / std::cosh(0.5 * p.gamma_N * t);
}

double visibility_exponential_form(const ModelParams& p, double t) {
  require_nonnegative_time(t, "visibility_exponential_form");
  const double x = 0.5 * p.gamma_N * t;
  if (x > 300.0) {
    const double e = std::exp(-x);
    return 2.0 * e / (1.0 + e * e);
  }
  const double e = std::exp(x);
  return 2.0 * e / (1.0 + e * e);
}

RadiatedProbabilities radiated_after_L2(const ModelParams& p, double t) {
  require_nonnegative_time(t, "radiated_after_L2");
  const double gl = p.gamma_L;
  const double gsum = p.gamma_L + p.gamma_N;
  const double slow = decay_integral(gl, t).real();
  const double fast = decay_integral(gsum, t).real();
  const double beat =
      decay_integral(cplx(gl + 0.5 * p.gamma_N, -p.delta_omega()), t).real();
  RadiatedProbabilities out;
  out.L1 = 0.25 * gl * (slow + 2.0 * beat + fast);
  out.L2 = 0.25 * gl * (slow - 2.0 * beat + fast);
  out.N = 0.5 * p.gamma_N * fast;
  return out;
}

double surviving_after_L2(const ModelParams& p, double t) {
  require_nonnegative_time(t, "surviving_after_L2");
  return 0.5 * std::exp(-(p.gamma_L + p.gamma_N) * t) + 0.5 * std::exp(-p.gamma_L * t);
}

}  // namespace beatsim::analytic
