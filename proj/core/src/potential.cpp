#include "dwqa/potential.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dwqa {

void PotentialSpec::validate() const {
  if (!(k > 0.0)) throw std::invalid_argument("potential: k must be > 0");
  if (!(w0 > 0.0)) throw std::invalid_argument("potential: w0 must be > 0");
  if (!(h0 >= 0.0)) throw std::invalid_argument("potential: h0 must be >= 0");
  if (!(x_min < x_max)) throw std::invalid_argument("potential: x_min must be < x_max");
}

double eval_potential(const PotentialSpec& spec, double x) {
  const double phase = 2.0 * std::numbers::pi * x / spec.w0;
  return 0.5 * spec.k * x * x + 0.5 * spec.h0 * (1.0 - std::cos(phase));
}

double eval_gradient(const PotentialSpec& spec, double x) {
  const double phase = 2.0 * std::numbers::pi * x / spec.w0;
  return spec.k * x + (std::numbers::pi * spec.h0 / spec.w0) * std::sin(phase);
}

Potential Potential::rastrigin(const PotentialSpec& spec) {
  spec.validate();
  return Potential{
      [spec](double x) { return eval_potential(spec, x); },
      [spec](double x) { return eval_gradient(spec, x); },
      spec.x_min,
      spec.x_max,
  };
}

Grid make_grid(double x_min, double x_max, int n_spins) {
  if (n_spins < 3) {
    throw std::invalid_argument("grid: n_spins must be >= 3, got " + std::to_string(n_spins));
  }
  if (!(x_min < x_max)) throw std::invalid_argument("grid: x_min must be < x_max");

  Grid grid;
  grid.n_spins = n_spins;
  const int intervals = n_spins - 1;
  grid.delta_x = (x_max - x_min) / intervals;
  grid.points.resize(static_cast<std::size_t>(intervals));
  // Weighted form keeps x_1 == x_min and the midpoint of a symmetric box at exactly 0.
  for (int m = 0; m < intervals; ++m) {
    grid.points[static_cast<std::size_t>(m)] =
        (x_min * static_cast<double>(intervals - m) + x_max * static_cast<double>(m)) / intervals;
  }
  return grid;
}

Grid make_grid(const PotentialSpec& spec, int n_spins) {
  spec.validate();
  return make_grid(spec.x_min, spec.x_max, n_spins);
}

}  // namespace dwqa
