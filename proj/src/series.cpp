#include "beatsim/series.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace beatsim {

std::string_view to_string(Engine engine) {
  switch (engine) {
    case Engine::Analytic: return "analytic";
    case Engine::Ode: return "ode";
    case Engine::Mc: return "mc";
  }
  return "?";
}

Engine engine_from_string(std::string_view name) {
  if (name == "analytic") return Engine::Analytic;
  if (name == "ode") return Engine::Ode;
  if (name == "mc") return Engine::Mc;
  throw std::invalid_argument("unknown engine '" + std::string(name) + "'");
}

void require_ascending_grid(std::span<const double> t_grid, std::string_view what) {
  if (t_grid.empty()) {
    throw std::invalid_argument(std::string(what) + ": time grid is empty");
  }
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!std::isfinite(t_grid[i])) {
      throw std::invalid_argument(std::string(what) + ": time grid contains a non-finite value");
    }
    if (i > 0 && !(t_grid[i] > t_grid[i - 1])) {
      throw std::invalid_argument(std::string(what) + ": time grid is not strictly increasing");
    }
  }
}

std::vector<double> uniform_grid(double t_max, int n_points) {
  if (n_points < 2) throw std::invalid_argument("uniform_grid: need at least 2 points");
  if (!(t_max > 0.0)) throw std::invalid_argument("uniform_grid: t_max must be > 0");
  std::vector<double> grid(static_cast<std::size_t>(n_points));
  const double h = t_max / (n_points - 1);
  for (int i = 0; i < n_points; ++i) grid[static_cast<std::size_t>(i)] = h * i;
  grid.back() = t_max;
  return grid;
}

bool is_uniform(std::span<const double> grid, double rel_tol) {
  if (grid.size() < 3) return true;
  const double mean = (grid.back() - grid.front()) / static_cast<double>(grid.size() - 1);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (std::abs((grid[i] - grid[i - 1]) - mean) > rel_tol * std::abs(mean)) return false;
  }
  return true;
}

}  // namespace beatsim
