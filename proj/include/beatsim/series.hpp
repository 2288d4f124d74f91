#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "beatsim/model.hpp"

namespace beatsim {

enum class Engine { Analytic, Ode, Mc };

std::string_view to_string(Engine engine);
/// Accepts "analytic", "ode", "mc". Throws std::invalid_argument otherwise.
Engine engine_from_string(std::string_view name);

/// Conditional detection density of `second` at delay t after a detection
/// in `first`, in units of 1/length.
struct CorrelationSeries {
  Channel first = Channel::L2;
  Channel second = Channel::L1;
  Engine engine = Engine::Analytic;
  ModelParams params;
  std::vector<double> t_grid;
  std::vector<double> values;
};

/// Throws std::invalid_argument unless the grid is non-empty, finite and
/// strictly increasing.
void require_ascending_grid(std::span<const double> t_grid, std::string_view what);

/// n points from 0 to t_max inclusive.
std::vector<double> uniform_grid(double t_max, int n_points);

/// True when consecutive spacings agree within rel_tol of the mean spacing.
bool is_uniform(std::span<const double> grid, double rel_tol = 1e-9);

}  // namespace beatsim
