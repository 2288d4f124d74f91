#pragma once

#include <vector>

#include "beatsim/analytic.hpp"
#include "beatsim/model.hpp"

namespace beatsim::oracle {

/// One-photon amplitudes of a channel sampled on a spatial (r) or spectral
/// (k) grid.
struct FieldSlice {
  Channel channel = Channel::L1;
  std::vector<double> grid;
  std::vector<cplx> values;
};

/// psi(r_j) = dk / sqrt(2 pi) * sum_m a(k_m) e^{i k_m r_j} on the grid
/// r_j = (j + 1/2) dr, dr = 2 pi / (n dk), j = 0..n-1. Offsetting by half a
/// cell keeps samples off the emitter position and the wavefront.
/// Throws std::invalid_argument on fewer than 2 samples or a non-uniform grid.
FieldSlice realspace_from_kspace(const FieldSlice& k_samples);

/// n samples of the single-emitter k-space amplitude at time t, centered on
/// omega0 / c with spacing chosen so that the real-space period is 2 c t.
FieldSlice single_emitter_kspace(const analytic::SingleEmitterParams& p, double t, int n);

struct RealspaceCheck {
  int n_modes = 0;
  double relative_l2_error = 0.0;
  /// Last grid point where |psi| is at least half the wavefront amplitude.
  double wavefront = 0.0;
  double dr = 0.0;
};

/// Transforms single_emitter_kspace samples and compares with the closed
/// real-space amplitude on the same grid.
RealspaceCheck realspace_check(const analytic::SingleEmitterParams& p, double t, int n);

}  // namespace beatsim::oracle
