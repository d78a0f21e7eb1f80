#pragma once

#include <functional>
#include <vector>

namespace dwqa {

/// Parameters of the rugged 1D objective
///   V(x) = k x^2 / 2 + (h0 / 2) (1 - cos(2 pi x / w0))
/// together with the search box [x_min, x_max].
struct PotentialSpec {
  double k = 0.5;
  double h0 = 1.0;
  double w0 = 0.2;
  double x_min = -3.0;
  double x_max = 3.0;

  /// Throws std::invalid_argument naming the first violated invariant.
  void validate() const;
};

double eval_potential(const PotentialSpec& spec, double x);
double eval_gradient(const PotentialSpec& spec, double x);

/// A differentiable 1D objective on a box. Encoders and continuous
/// optimizers only see this pair, so non-Rastrigin potentials plug in
/// without touching either.
struct Potential {
  std::function<double(double)> value;
  std::function<double(double)> gradient;
  double x_min = 0.0;
  double x_max = 1.0;

  static Potential rastrigin(const PotentialSpec& spec);
};

/// Discretization x_j = x_min + (j - 1) dx, j = 1..N-1, dx = (x_max - x_min)/(N - 1).
struct Grid {
  int n_spins = 0;
  std::vector<double> points;  // points[j - 1] == x_j
  double delta_x = 0.0;

  /// 1-based access matching the domain-wall bond index.
  double x(int j) const { return points.at(static_cast<std::size_t>(j - 1)); }
  int size() const { return static_cast<int>(points.size()); }
};

Grid make_grid(double x_min, double x_max, int n_spins);
Grid make_grid(const PotentialSpec& spec, int n_spins);

}  // namespace dwqa
