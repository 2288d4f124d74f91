#include "beatsim/oracle/jumps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

#include <Eigen/Eigenvalues>

#include "beatsim/series.hpp"

namespace beatsim::oracle {

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <typename Partial, typename Body>
std::vector<Partial> run_chunks(std::uint64_t n, unsigned n_threads, const Partial& empty,
                                Body body) {
  const unsigned workers = std::max(1u, std::min<unsigned>(n_threads, static_cast<unsigned>(
                                                                          std::max<std::uint64_t>(n, 1))));
  std::vector<Partial> partials(workers, empty);
  auto work = [&](unsigned w) {
    const std::uint64_t begin = n * w / workers;
    const std::uint64_t end = n * (w + 1) / workers;
    for (std::uint64_t i = begin; i < end; ++i) body(partials[w], i);
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  return partials;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

JumpSampler::JumpSampler(const ModelParams& params, JumpOptions options)
    : params_(params), options_(options) {
  params_.validate();
  Matrix4c h_eff = build_hamiltonian(params_, Basis::Product);
  for (Channel ch : all_channels) {
    const auto i = static_cast<std::size_t>(ch);
    jumps_[i] = jump_operator(ch);
    h_eff -= cplx(0.0, 0.5 * channel_rate(params_, ch)) * (jumps_[i].adjoint() * jumps_[i]);
  }
  Eigen::ComplexEigenSolver<Matrix4c> solver(h_eff);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("JumpSampler: eigen-decomposition of H_eff failed");
  }
  vectors_ = solver.eigenvectors();
  eigenvalues_ = solver.eigenvalues();
  inverse_vectors_ = vectors_.inverse();
  const Matrix4c rebuilt = vectors_ * eigenvalues_.asDiagonal() * inverse_vectors_;
  const double scale = std::max(1.0, h_eff.norm());
  if ((rebuilt - h_eff).norm() > 1e-10 * scale) {
    throw std::runtime_error("JumpSampler: H_eff is not diagonalizable to working precision");
  }
  const double reference_rate =
      params_.gamma_N > 0.0 ? params_.gamma_N : std::max(params_.gamma_L, 1e-300);
  time_tolerance_ = 1e-10 / reference_rate;
}

struct JumpSampler::Segment {
  const JumpSampler& owner;
  Vector4c coefficients;

  Segment(const JumpSampler& s, const Vector4c& psi)
      : owner(s), coefficients(s.inverse_vectors_ * psi) {}

  [[nodiscard]] Vector4c state(double s) const {
    Vector4c phased;
    for (int i = 0; i < 4; ++i) {
      phased(i) = coefficients(i) * std::exp(cplx(0.0, -1.0) * owner.eigenvalues_(i) * s);
    }
    return owner.vectors_ * phased;
  }

  [[nodiscard]] double survival(double s) const { return state(s).squaredNorm(); }

  // Slowest positive decay rate among occupied eigencomponents; 0 when
  // nothing can decay.
  [[nodiscard]] double slowest_decay() const {
    const double scale = std::max(1.0, std::abs(owner.params_.E0) + std::abs(owner.params_.W));
    double slowest = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 4; ++i) {
      if (std::abs(coefficients(i)) < 1e-13) continue;
      const double rate = -2.0 * owner.eigenvalues_(i).imag();
      if (rate > 1e-13 * scale) slowest = std::min(slowest, rate);
    }
    return std::isfinite(slowest) ? slowest : 0.0;
  }
};

double JumpSampler::survival(const SystemState& initial, double t) const {
  const SystemState s = initial.basis == Basis::Product ? initial : to_product_basis(initial);
  return Segment(*this, s.amplitudes).survival(t);
}

Trajectory JumpSampler::run(const SystemState& initial, std::uint64_t seed) const {
  Trajectory traj;
  traj.seed = seed;
  std::mt19937_64 rng(seed);
  const SystemState start = initial.basis == Basis::Product ? initial : to_product_basis(initial);
  const double n0 = start.norm();
  if (!(n0 > 0.0)) throw std::invalid_argument("quantum_jump_trajectory: initial state is zero");
  Vector4c psi = start.amplitudes / n0;
  double elapsed = 0.0;

  for (;;) {
    const Segment seg(*this, psi);
    const double slowest = seg.slowest_decay();
    double span = 0.0;
    if (options_.horizon > 0.0) {
      span = options_.horizon - elapsed;
    } else if (slowest > 0.0) {
      span = 60.0 / slowest;
    }
    if (slowest == 0.0) {
      if (span > 0.0) {
        const Vector4c end = seg.state(span);
        if (end.norm() > 0.0) psi = end / end.norm();
      }
      break;
    }
    if (!(span > 0.0)) break;

    const double target = 1.0 - uniform01(rng);
    const double channel_draw = uniform01(rng);
    if (seg.survival(span) >= target) {
      const Vector4c end = seg.state(span);
      const double n = end.norm();
      if (n > 0.0) psi = end / n;
      elapsed += span;
      break;
    }
    double lo = 0.0;
    double hi = span;
    while (hi - lo > time_tolerance_) {
      const double mid = 0.5 * (lo + hi);
      if (seg.survival(mid) > target) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double s = 0.5 * (lo + hi);
    const Vector4c at_jump = seg.state(s);

    std::array<double, 3> weights{};
    double total = 0.0;
    for (Channel ch : all_channels) {
      const auto i = static_cast<std::size_t>(ch);
      weights[i] = channel_rate(params_, ch) * (jumps_[i] * at_jump).squaredNorm();
      total += weights[i];
    }
    if (!(total > 0.0)) break;
    const double pick = channel_draw * total;
    Channel chosen = Channel::N;
    double acc = 0.0;
    for (Channel ch : all_channels) {
      const auto i = static_cast<std::size_t>(ch);
      if (weights[i] <= 0.0) continue;
      chosen = ch;
      acc += weights[i];
      if (pick < acc) break;
    }
    const Vector4c projected = jumps_[static_cast<std::size_t>(chosen)] * at_jump;
    psi = projected / projected.norm();
    elapsed += s;
    traj.events.push_back({chosen, elapsed + options_.detector_radius / params_.c});
  }
  traj.final_state.amplitudes = psi;
  traj.final_state.basis = Basis::Product;
  return traj;
}

Trajectory quantum_jump_trajectory(const ModelParams& params, const SystemState& initial,
                                   std::uint64_t seed, JumpOptions options) {
  return JumpSampler(params, options).run(initial, seed);
}

DelayHistogram::DelayHistogram(std::vector<double> bin_edges) : edges(std::move(bin_edges)) {
  for (auto& c : counts) c.assign(bins(), 0);
}

long DelayHistogram::bin_of(double t) const {
  if (edges.size() < 2 || t < edges.front() || !(t < edges.back())) return -1;
  const auto it = std::upper_bound(edges.begin(), edges.end(), t);
  return static_cast<long>(it - edges.begin()) - 1;
}

void DelayHistogram::add(Channel ch, double delay) {
  const long b = bin_of(delay);
  if (b >= 0) ++counts[static_cast<std::size_t>(ch)][static_cast<std::size_t>(b)];
}

double DelayHistogram::density(Channel ch, std::size_t bin, double c) const {
  if (n_runs == 0) return 0.0;
  const double width = edges[bin + 1] - edges[bin];
  return static_cast<double>(counts[static_cast<std::size_t>(ch)][bin]) /
         (static_cast<double>(n_runs) * width * c);
}

DelayHistogram& DelayHistogram::operator+=(const DelayHistogram& other) {
  if (other.edges != edges) throw std::invalid_argument("DelayHistogram: bin edges differ");
  n_runs += other.n_runs;
  for (std::size_t ch = 0; ch < 3; ++ch) {
    for (std::size_t b = 0; b < counts[ch].size(); ++b) counts[ch][b] += other.counts[ch][b];
  }
  return *this;
}

CascadeHistogram& CascadeHistogram::operator+=(const CascadeHistogram& other) {
  n_traj += other.n_traj;
  no_detection += other.no_detection;
  for (std::size_t i = 0; i < 3; ++i) {
    first_counts[i] += other.first_counts[i];
    conditional[i] += other.conditional[i];
  }
  return *this;
}

namespace {

void check_edges(const std::vector<double>& edges) {
  if (edges.size() < 2) throw std::invalid_argument("histogram needs at least one bin");
  require_ascending_grid(edges, "histogram edges");
}

}  // namespace

CascadeHistogram cascade_histogram(const ModelParams& params, const MonteCarloOptions& options) {
  if (options.n_traj == 0) throw std::invalid_argument("cascade_histogram: zero trajectories requested");
  if (options.n_traj < 1000) {
    throw std::invalid_argument("cascade_histogram: need at least 1000 trajectories");
  }
  check_edges(options.edges);
  const JumpSampler sampler(params, options.jump);
  const SystemState ee = SystemState::product(1.0, 0.0, 0.0, 0.0);

  struct Partial {
    CascadeHistogram hist;
    std::vector<std::pair<std::uint64_t, std::vector<DetectionEvent>>> events;
  };
  Partial empty;
  for (auto& h : empty.hist.conditional) h = DelayHistogram(options.edges);

  auto partials = run_chunks(options.n_traj, options.n_threads, empty, [&](Partial& part, std::uint64_t i) {
    const Trajectory traj = sampler.run(ee, derive_seed(options.master_seed, i));
    auto& hist = part.hist;
    ++hist.n_traj;
    if (traj.events.empty()) {
      ++hist.no_detection;
    } else {
      const auto first = static_cast<std::size_t>(traj.events[0].channel);
      ++hist.first_counts[first];
      ++hist.conditional[first].n_runs;
      if (traj.events.size() >= 2) {
        hist.conditional[first].add(traj.events[1].channel, traj.events[1].time - traj.events[0].time);
      }
    }
    if (options.keep_events) part.events.emplace_back(i, traj.events);
  });

  CascadeHistogram total = partials.front().hist;
  for (std::size_t w = 1; w < partials.size(); ++w) total += partials[w].hist;
  if (options.keep_events) {
    total.events.resize(options.n_traj);
    for (auto& part : partials) {
      for (auto& [id, ev] : part.events) total.events[id] = std::move(ev);
    }
  }
  return total;
}

DetectionHistogram detection_histogram(const ModelParams& params, const SystemState& initial,
                                       const MonteCarloOptions& options) {
  if (options.n_traj == 0) throw std::invalid_argument("detection_histogram: zero trajectories requested");
  check_edges(options.edges);
  const JumpSampler sampler(params, options.jump);
  const double lag = options.jump.detector_radius / params.c;

  struct Partial {
    DetectionHistogram hist;
    std::vector<std::pair<std::uint64_t, std::vector<DetectionEvent>>> events;
  };
  Partial empty;
  empty.hist.histogram = DelayHistogram(options.edges);

  auto partials = run_chunks(options.n_traj, options.n_threads, empty, [&](Partial& part, std::uint64_t i) {
    const Trajectory traj = sampler.run(initial, derive_seed(options.master_seed, i));
    ++part.hist.histogram.n_runs;
    if (traj.events.empty()) {
      ++part.hist.no_detection;
    } else {
      part.hist.histogram.add(traj.events[0].channel, traj.events[0].time - lag);
    }
    if (options.keep_events) part.events.emplace_back(i, traj.events);
  });

  DetectionHistogram total = partials.front().hist;
  for (std::size_t w = 1; w < partials.size(); ++w) {
    total.histogram += partials[w].hist.histogram;
    total.no_detection += partials[w].hist.no_detection;
  }
  if (options.keep_events) {
    total.events.resize(options.n_traj);
    for (auto& part : partials) {
      for (auto& [id, ev] : part.events) total.events[id] = std::move(ev);
    }
  }
  return total;
}

}  // namespace beatsim::oracle
