#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dwqa/potential.hpp"

namespace dwqa {

using Objective = std::function<double(double)>;

/// Grid step of the N = 211 chain on [-3, 3]; default radius for the success flag.
inline constexpr double kDefaultSuccessRadius = 6.0 / 210.0;

struct OptRun {
  double x_final = 0.0;
  double f_final = 0.0;
  int iterations = 0;
  double wall_time = 0.0;  // seconds
  bool converged = false;
  bool success = false;  // |x_final| < success radius
};

struct DeParams {
  int popsize = 10;
  int g_max = 100;
  double f = 0.8;
  double cr = 0.9;
  std::string strategy = "best/2/bin";
  double tol = 1e-7;
  /// Optional starting population; drawn uniformly in the bounds when empty.
  std::vector<double> initial_population;

  void validate() const;
};

struct BhParams {
  int t_max = 100;
  double temperature = 1.0;
  double a = -0.5;
  double b = 0.5;
  /// Iteration budget of each local CGD minimization.
  int local_t_max = 100;

  void validate() const;
};

/// Stopping tolerances shared by the local methods.
inline constexpr double kStepTolerance = 1e-7;
inline constexpr double kGradientTolerance = 1e-10;

OptRun nelder_mead(const Objective& f, double x0, int t_max, double tol = kStepTolerance,
                   double success_radius = kDefaultSuccessRadius);

OptRun conjugate_gradient(const Objective& f, const Objective& grad, double x0, int t_max,
                          double success_radius = kDefaultSuccessRadius);

OptRun basin_hopping(const Objective& f, const Objective& grad, double x0, const BhParams& params,
                     std::uint64_t seed, double success_radius = kDefaultSuccessRadius);

OptRun differential_evolution(const Objective& f, double lower, double upper,
                              const DeParams& params, std::uint64_t seed,
                              double success_radius = kDefaultSuccessRadius);

enum class Algorithm { NelderMead, ConjugateGradient, BasinHopping, DifferentialEvolution };

std::string to_string(Algorithm algo);
Algorithm algorithm_from_string(const std::string& name);

struct BenchmarkRow {
  int t_max = 0;
  int n_init = 0;
  double p_gs = 0.0;
  double e_abs = 0.0;
  double mean_wall_time = 0.0;
};

struct BenchmarkOptions {
  double success_radius = kDefaultSuccessRadius;
  int de_popsize = 10;
  BhParams bh{};
};

/// n_init uniform starting points per t_max; t_max is the iteration budget
/// (generations for DE, hops for BH).
std::vector<BenchmarkRow> benchmark_sweep(const PotentialSpec& spec, Algorithm algo, int n_init,
                                          const std::vector<int>& t_max_list, std::uint64_t seed,
                                          const BenchmarkOptions& options = {});

}  // namespace dwqa
