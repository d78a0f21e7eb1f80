#pragma once

#include <vector>

namespace dwqa {

/// Linear annealing schedule A(s)/2 = 1 - s, B(s)/2 = s, s in [0, 1].
struct LinearAnnealing {
  static double transverse(double s) { return 2.0 * (1.0 - s); }  // A(s)
  static double problem(double s) { return 2.0 * s; }             // B(s)
};

/// Monotone problem-strength curve B(s) on [0, 1], either linear or
/// tabulated with piecewise-linear interpolation.
class Schedule {
 public:
  static Schedule linear(double slope, double intercept = 0.0);
  static Schedule tabulated(std::vector<double> s, std::vector<double> b);

  double operator()(double s) const;

 private:
  Schedule() = default;
  double slope_ = 0.0;
  double intercept_ = 0.0;
  std::vector<double> s_;
  std::vector<double> b_;
};

}  // namespace dwqa
