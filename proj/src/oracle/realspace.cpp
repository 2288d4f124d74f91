#include "beatsim/oracle/realspace.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <fftw3.h>

#include "beatsim/series.hpp"

namespace beatsim::oracle {

namespace {

// FFTW planning is not thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void inverse_dft(std::vector<cplx>& data) {
  auto* buffer = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(data.size()), buffer, buffer, FFTW_BACKWARD,
                            FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan);
}

}  // namespace

FieldSlice realspace_from_kspace(const FieldSlice& k_samples) {
  const std::size_t n = k_samples.grid.size();
  if (n < 2 || k_samples.values.size() != n) {
    throw std::invalid_argument("realspace_from_kspace: need >= 2 samples with matching values");
  }
  if (!is_uniform(k_samples.grid, 1e-9)) {
    throw std::invalid_argument("realspace_from_kspace: k grid is not uniform");
  }
  const double k0 = k_samples.grid.front();
  const double dk = (k_samples.grid.back() - k0) / static_cast<double>(n - 1);
  if (!(dk > 0.0)) throw std::invalid_argument("realspace_from_kspace: k grid must ascend");
  const double dr = 2.0 * std::numbers::pi / (static_cast<double>(n) * dk);
  const double r0 = 0.5 * dr;

  std::vector<cplx> data(n);
  for (std::size_t m = 0; m < n; ++m) {
    data[m] = k_samples.values[m] * std::exp(cplx(0.0, static_cast<double>(m) * dk * r0));
  }
  inverse_dft(data);

  FieldSlice out;
  out.channel = k_samples.channel;
  out.grid.resize(n);
  out.values.resize(n);
  const double scale = dk / std::sqrt(2.0 * std::numbers::pi);
  for (std::size_t j = 0; j < n; ++j) {
    const double r = r0 + static_cast<double>(j) * dr;
    out.grid[j] = r;
    out.values[j] = scale * std::exp(cplx(0.0, k0 * r)) * data[j];
  }
  return out;
}

FieldSlice single_emitter_kspace(const analytic::SingleEmitterParams& p, double t, int n) {
  if (n < 2) throw std::invalid_argument("single_emitter_kspace: n must be >= 2");
  if (!(t > 0.0)) throw std::invalid_argument("single_emitter_kspace: t must be > 0");
  const double period = 2.0 * p.c * t;
  const double dk = 2.0 * std::numbers::pi / period;
  const double k_center = p.omega0 / p.c;
  FieldSlice out;
  out.grid.resize(static_cast<std::size_t>(n));
  out.values.resize(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) {
    const double k = k_center + (m - n / 2) * dk;
    out.grid[static_cast<std::size_t>(m)] = k;
    out.values[static_cast<std::size_t>(m)] = analytic::single_k_amplitude(p, k, t);
  }
  return out;
}

RealspaceCheck realspace_check(const analytic::SingleEmitterParams& p, double t, int n) {
  const FieldSlice field = realspace_from_kspace(single_emitter_kspace(p, t, n));
  RealspaceCheck check;
  check.n_modes = n;
  check.dr = field.grid[1] - field.grid[0];
  double err2 = 0.0;
  double ref2 = 0.0;
  const double front_level = 0.5 * std::sqrt(p.gamma / p.c);
  for (std::size_t j = 0; j < field.grid.size(); ++j) {
    const cplx exact = analytic::single_realspace_amplitude(p, field.grid[j], t);
    err2 += std::norm(field.values[j] - exact);
    ref2 += std::norm(exact);
    if (std::abs(field.values[j]) >= front_level) check.wavefront = field.grid[j];
  }
  check.relative_l2_error = std::sqrt(err2 / ref2);
  return check;
}

}  // namespace beatsim::oracle
