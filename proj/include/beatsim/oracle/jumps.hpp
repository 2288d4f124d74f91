#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "beatsim/events.hpp"
#include "beatsim/model.hpp"

namespace beatsim::oracle {

/// Per-trajectory streams are std::mt19937_64 seeded with
/// derive_seed(master, trajectory_id).
inline constexpr std::string_view generator_name = "mt19937_64/splitmix64";

/// SplitMix64 finalizer applied to master + (index + 1) * 0x9E3779B97F4A7C15.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

struct JumpOptions {
  /// Absolute end of the trajectory; <= 0 runs until the remaining
  /// survival probability is below e^-60 of every decaying component.
  double horizon = 0.0;
  double detector_radius = 0.0;
};

struct Trajectory {
  std::uint64_t seed = 0;
  std::vector<DetectionEvent> events;
  /// Normalized conditional state after the last jump or at the horizon.
  SystemState final_state;
};

/// Samples detection records under the effective non-Hermitian Hamiltonian
/// H - (i/2) sum_ch rate_ch J_ch^dagger J_ch. Waiting times are drawn by
/// inverting the no-jump survival probability with bisection; the channel
/// is drawn with weights rate_ch |J_ch psi|^2 at the jump time.
class JumpSampler {
 public:
  explicit JumpSampler(const ModelParams& params, JumpOptions options = {});

  [[nodiscard]] Trajectory run(const SystemState& initial, std::uint64_t seed) const;

  /// Probability that no photon has been emitted by time t from `initial`.
  [[nodiscard]] double survival(const SystemState& initial, double t) const;

  [[nodiscard]] const ModelParams& params() const { return params_; }

 private:
  struct Segment;

  ModelParams params_;
  JumpOptions options_;
  Matrix4c vectors_;
  Matrix4c inverse_vectors_;
  Vector4c eigenvalues_;
  std::array<Matrix4c, 3> jumps_;
  double time_tolerance_ = 1e-10;
};

Trajectory quantum_jump_trajectory(const ModelParams& params, const SystemState& initial,
                                   std::uint64_t seed, JumpOptions options = {});

/// Counts of detections per channel versus delay, binned on `edges`.
struct DelayHistogram {
  std::vector<double> edges;
  /// Number of runs this histogram is conditioned on.
  std::uint64_t n_runs = 0;
  std::array<std::vector<std::uint64_t>, 3> counts;

  explicit DelayHistogram(std::vector<double> bin_edges = {});

  [[nodiscard]] std::size_t bins() const { return edges.empty() ? 0 : edges.size() - 1; }
  /// Index of the bin holding `t`, or -1 when outside [edges.front(), edges.back()).
  [[nodiscard]] long bin_of(double t) const;
  void add(Channel ch, double delay);
  /// counts / (n_runs * width * c): an estimate of the density per length.
  [[nodiscard]] double density(Channel ch, std::size_t bin, double c) const;

  DelayHistogram& operator+=(const DelayHistogram& other);
};

struct MonteCarloOptions {
  std::uint64_t n_traj = 0;
  std::uint64_t master_seed = 1;
  std::vector<double> edges;
  unsigned n_threads = 1;
  bool keep_events = false;
  JumpOptions jump;
};

/// Two-photon records started from |ee>, histogrammed by the first
/// channel and the delay to the second photon.
struct CascadeHistogram {
  std::uint64_t n_traj = 0;
  std::array<std::uint64_t, 3> first_counts{};
  std::uint64_t no_detection = 0;
  /// conditional[first] has n_runs = first_counts[first].
  std::array<DelayHistogram, 3> conditional;
  /// events[i] belongs to trajectory i (kept only on request).
  std::vector<std::vector<DetectionEvent>> events;

  CascadeHistogram& operator+=(const CascadeHistogram& other);
};

/// Throws std::invalid_argument when n_traj is 0 or below 1000, or edges are
/// not ascending.
CascadeHistogram cascade_histogram(const ModelParams& params, const MonteCarloOptions& options);

/// First-detection histogram from an arbitrary initial state, the delay
/// measured from t = 0.
struct DetectionHistogram {
  DelayHistogram histogram;
  std::uint64_t no_detection = 0;
  std::vector<std::vector<DetectionEvent>> events;
};

DetectionHistogram detection_histogram(const ModelParams& params, const SystemState& initial,
                                       const MonteCarloOptions& options);

}  // namespace beatsim::oracle
