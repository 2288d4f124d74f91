#include "beatsim/oracle/ladder.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace beatsim::oracle {

namespace {

using namespace std::complex_literals;

// Coupling of one ladder, precomputed for the derivative loop. The ladder
// sees the source amplitude <gg|J|psi> = w_eg x_eg + w_ge x_ge and feeds
// back into x_eg, x_ge through the conjugate weights.
struct LadderTerm {
  Channel channel;
  double g = 0.0;
  cplx w_eg;
  cplx w_ge;
  std::vector<double> detuning;  // omega_m - E0
  std::size_t offset = 0;        // first mode index in the flat state
};

struct Rhs {
  double W = 0.0;
  std::vector<LadderTerm> terms;
  std::size_t size = 2;

  // y = [x_eg, x_ge, modes...] in the frame rotating at E0.
  void operator()(const std::vector<cplx>& y, std::vector<cplx>& dy) const {
    const cplx x_eg = y[0];
    const cplx x_ge = y[1];
    cplx d_eg = -1i * W * x_ge;
    cplx d_ge = -1i * W * x_eg;
    for (const auto& term : terms) {
      const cplx source = term.g * (term.w_eg * x_eg + term.w_ge * x_ge);
      const cplx* b = y.data() + term.offset;
      cplx* db = dy.data() + term.offset;
      cplx mode_sum = 0.0;
      const std::size_t n = term.detuning.size();
      for (std::size_t m = 0; m < n; ++m) {
        mode_sum += b[m];
        // -i (nu_m b_m + source), spelled out to stay off the libgcc complex multiply
        const double re = term.detuning[m] * b[m].real() + source.real();
        const double im = term.detuning[m] * b[m].imag() + source.imag();
        db[m] = cplx(im, -re);
      }
      d_eg += -1i * term.g * std::conj(term.w_eg) * mode_sum;
      d_ge += -1i * term.g * std::conj(term.w_ge) * mode_sum;
    }
    dy[0] = d_eg;
    dy[1] = d_ge;
  }
};

Rhs make_rhs(const WwSystem& sys) {
  Rhs rhs;
  rhs.W = sys.W;
  std::size_t offset = 2;
  for (const auto& ladder : sys.ladders) {
    const Matrix4c op = jump_operator(ladder.channel);
    LadderTerm term;
    term.channel = ladder.channel;
    term.g = ladder.coupling();
    term.w_eg = op(index::gg, index::eg);
    term.w_ge = op(index::gg, index::ge);
    term.detuning.resize(static_cast<std::size_t>(ladder.n_modes));
    for (int m = 0; m < ladder.n_modes; ++m) {
      term.detuning[static_cast<std::size_t>(m)] = ladder.frequency(m) - sys.E0;
    }
    term.offset = offset;
    offset += term.detuning.size();
    rhs.terms.push_back(std::move(term));
  }
  rhs.size = offset;
  return rhs;
}

double decay_scale(const WwSystem& sys) {
  double local = 0.0;
  double nonlocal = 0.0;
  for (const auto& ladder : sys.ladders) {
    if (ladder.channel == Channel::N) {
      nonlocal = std::max(nonlocal, ladder.rate);
    } else {
      local = std::max(local, ladder.rate);
    }
  }
  return local + nonlocal;
}

class Rk4 {
 public:
  explicit Rk4(std::size_t n) : k1_(n), k2_(n), k3_(n), k4_(n), tmp_(n) {}

  void step(const Rhs& f, std::vector<cplx>& y, double h) {
    const std::size_t n = y.size();
    f(y, k1_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + 0.5 * h * k1_[i];
    f(tmp_, k2_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + 0.5 * h * k2_[i];
    f(tmp_, k3_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * k3_[i];
    f(tmp_, k4_);
    const double w = h / 6.0;
    for (std::size_t i = 0; i < n; ++i) {
      y[i] += w * (k1_[i] + 2.0 * (k2_[i] + k3_[i]) + k4_[i]);
    }
  }

 private:
  std::vector<cplx> k1_, k2_, k3_, k4_, tmp_;
};

}  // namespace

double ModeLadder::coupling() const {
  return std::sqrt(rate * spacing() / (2.0 * std::numbers::pi));
}

double ModeLadder::derived_rate() const {
  const double g = coupling();
  return 2.0 * std::numbers::pi * g * g * density();
}

double default_half_width(const ModelParams& p) {
  return 500.0 * (p.gamma_L + p.gamma_N) + 25.0 * std::abs(p.delta_omega());
}

WwSystem make_system(const ModelParams& p, const LadderSettings& settings) {
  p.validate();
  const double half = settings.half_width > 0.0 ? settings.half_width : default_half_width(p);
  WwSystem sys;
  sys.E0 = p.E0;
  sys.W = p.W;
  for (Channel ch : all_channels) {
    const double rate = channel_rate(p, ch);
    if (rate <= 0.0) continue;
    sys.ladders.push_back({ch, p.E0 - half, p.E0 + half, settings.n_modes, rate});
  }
  return sys;
}

WwSystem make_single_emitter_system(const analytic::SingleEmitterParams& p,
                                    const LadderSettings& settings) {
  p.validate();
  const double half = settings.half_width > 0.0 ? settings.half_width : 500.0 * p.gamma;
  WwSystem sys;
  sys.E0 = p.omega0;
  sys.W = 0.0;
  if (p.gamma > 0.0) {
    sys.ladders.push_back({Channel::L1, p.omega0 - half, p.omega0 + half, settings.n_modes, p.gamma});
  }
  return sys;
}

double max_frequency(const WwSystem& sys) {
  double top = std::abs(sys.W);
  for (const auto& ladder : sys.ladders) {
    top = std::max({top, std::abs(ladder.omega_min - sys.E0), std::abs(ladder.omega_max - sys.E0)});
  }
  return top;
}

double default_dt(const WwSystem& sys) {
  const double top = max_frequency(sys);
  return top > 0.0 ? 0.08 / top : 1e-2;
}

void validate(const WwSystem& sys, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("integrate_ww: dt must be finite and > 0");
  }
  const double lo_res = sys.E0 - std::abs(sys.W);
  const double hi_res = sys.E0 + std::abs(sys.W);
  const double required_width = 50.0 * std::max(decay_scale(sys), 2.0 * std::abs(sys.W));
  for (const auto& ladder : sys.ladders) {
    if (ladder.n_modes < 2) {
      throw std::invalid_argument("integrate_ww: a ladder needs at least 2 modes");
    }
    if (!(ladder.omega_max > ladder.omega_min)) {
      throw std::invalid_argument("integrate_ww: ladder window is empty");
    }
    if (!(ladder.rate >= 0.0)) throw std::invalid_argument("integrate_ww: negative ladder rate");
    if (!(ladder.omega_min < lo_res && hi_res < ladder.omega_max)) {
      throw std::invalid_argument("integrate_ww: ladder window for channel " +
                                  std::string(to_string(ladder.channel)) +
                                  " does not contain the system resonances");
    }
    if (ladder.omega_max - ladder.omega_min < required_width) {
      std::ostringstream msg;
      msg << "integrate_ww: ladder window width " << (ladder.omega_max - ladder.omega_min)
          << " is below 50 * max(decay rate, |delta_omega|) = " << required_width;
      throw std::invalid_argument(msg.str());
    }
  }
  const double top = max_frequency(sys);
  if (dt * top > 0.1 * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "integrate_ww: dt = " << dt << " under-resolves the fastest frequency " << top
        << " (need dt * omega_max <= 0.1)";
    throw std::invalid_argument(msg.str());
  }
}

double FullState::norm2() const {
  double total = system.norm2();
  for (const auto& ladder : modes) {
    for (const auto& b : ladder) total += std::norm(b);
  }
  return total;
}

WwResult integrate_ww(const WwSystem& sys, const SystemState& initial,
                      std::span<const double> sample_times, double dt) {
  validate(sys, dt);
  if (sample_times.empty()) throw std::invalid_argument("integrate_ww: no sample times");
  for (std::size_t i = 0; i < sample_times.size(); ++i) {
    if (!(sample_times[i] >= 0.0) || (i > 0 && !(sample_times[i] > sample_times[i - 1]))) {
      throw std::invalid_argument("integrate_ww: sample times must be >= 0 and strictly increasing");
    }
  }
  const SystemState start =
      initial.basis == Basis::Product ? initial : to_product_basis(initial);
  if (std::abs(start.amplitudes(index::ee)) > 1e-14) {
    throw std::invalid_argument(
        "integrate_ww: initial state has a doubly excited component; the mode-ladder "
        "oracle covers the one-excitation sector only");
  }

  const Rhs rhs = make_rhs(sys);
  std::vector<cplx> y(rhs.size, cplx(0.0));
  y[0] = start.amplitudes(index::eg);
  y[1] = start.amplitudes(index::ge);
  const cplx ground = start.amplitudes(index::gg);
  Rk4 rk(rhs.size);

  auto flat_norm2 = [&] {
    double s = std::norm(ground);
    for (const auto& v : y) s += std::norm(v);
    return s;
  };
  const double norm0 = flat_norm2();

  auto make_sample = [&](double t) {
    const cplx phase = std::exp(cplx(0.0, -sys.E0 * t));
    WwSample s;
    s.t = t;
    s.system = SystemState::product(0.0, y[0] * phase, y[1] * phase, ground);
    for (const auto& term : rhs.terms) {
      double n = 0.0;
      for (std::size_t m = 0; m < term.detuning.size(); ++m) n += std::norm(y[term.offset + m]);
      s.photons[static_cast<std::size_t>(term.channel)] += n;
    }
    s.norm2 = flat_norm2();
    return s;
  };

  WwResult result;
  result.dt = dt;
  double t = 0.0;
  for (double target : sample_times) {
    const double span = target - t;
    if (span > 0.0) {
      const long n_sub = static_cast<long>(std::ceil(span / dt * (1.0 - 1e-12)));
      const double h = span / static_cast<double>(n_sub);
      for (long k = 0; k < n_sub; ++k) rk.step(rhs, y, h);
      result.steps += n_sub;
      t = target;
    }
    result.samples.push_back(make_sample(target));
    result.max_norm_drift = std::max(result.max_norm_drift, std::abs(result.samples.back().norm2 - norm0));
  }

  const cplx phase = std::exp(cplx(0.0, -sys.E0 * t));
  result.final_state.t = t;
  result.final_state.system = result.samples.back().system;
  for (const auto& term : rhs.terms) {
    std::vector<cplx> modes(term.detuning.size());
    for (std::size_t m = 0; m < modes.size(); ++m) modes[m] = y[term.offset + m] * phase;
    result.final_state.modes.push_back(std::move(modes));
  }
  return result;
}

std::string describe(const WwSystem& sys, const WwResult& result) {
  std::ostringstream out;
  out.precision(10);
  out << "[ww]\n";
  out << "E0 = " << sys.E0 << "\nW = " << sys.W << "\n";
  out << "dt = " << result.dt << "\nsteps = " << result.steps << "\n";
  out << "omega_max_rotating = " << max_frequency(sys) << "\n";
  out << "max_norm_drift = " << result.max_norm_drift << "\n";
  for (const auto& ladder : sys.ladders) {
    out << "[ww.ladder." << to_string(ladder.channel) << "]\n";
    out << "omega_min = " << ladder.omega_min << "\nomega_max = " << ladder.omega_max << "\n";
    out << "n_modes = " << ladder.n_modes << "\nrate = " << ladder.rate << "\n";
    out << "derived_rate = " << ladder.derived_rate() << "\n";
  }
  return out.str();
}

double readout_density(const ModelParams& p, const SystemState& state, Channel ch) {
  const SystemState s = state.basis == Basis::Product ? state : to_product_basis(state);
  return channel_rate(p, ch) / p.c * (jump_operator(ch) * s.amplitudes).squaredNorm();
}

}  // namespace beatsim::oracle
