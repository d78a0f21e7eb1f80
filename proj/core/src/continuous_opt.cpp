#include "dwqa/continuous_opt.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "dwqa/rng.hpp"

namespace dwqa {

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kArmijoC = 1e-4;
constexpr int kRestartEvery = 10;
constexpr double kInitialTrialStep = 1e-3;
constexpr int kMaxDoublings = 60;
constexpr int kMaxHalvings = 60;

OptRun finish(OptRun run, const Objective& f, double radius, Clock::time_point start) {
  run.f_final = f(run.x_final);
  run.success = std::abs(run.x_final) < radius;
  run.wall_time = std::chrono::duration<double>(Clock::now() - start).count();
  return run;
}

// Step length along d from x. Expands a trial step by doubling while the
// function keeps decreasing, then backtracks by halving until Armijo holds.
double line_search(const Objective& f, const Objective& grad, double x, double fx, double gx,
                   double d) {
  const double slope = gx * d;
  double alpha = kInitialTrialStep / std::abs(d);
  double f_alpha = f(x + alpha * d);
  if (f_alpha < fx) {
    for (int k = 0; k < kMaxDoublings; ++k) {
      const double next = 2.0 * alpha;
      const double f_next = f(x + next * d);
      if (!(f_next < f_alpha)) break;
      alpha = next;
      f_alpha = f_next;
      if (grad(x + alpha * d) * d >= 0.0) break;
    }
  }
  for (int k = 0; k < kMaxHalvings && f_alpha > fx + kArmijoC * alpha * slope; ++k) {
    alpha *= 0.5;
    f_alpha = f(x + alpha * d);
  }
  return alpha;
}

}  // namespace

void DeParams::validate() const {
  if (popsize < 4) throw std::invalid_argument("DE popsize must be >= 4");
  if (g_max < 1) throw std::invalid_argument("DE g_max must be >= 1");
  if (f < 0.0) throw std::invalid_argument("DE F must be >= 0");
  if (cr < 0.0 || cr > 1.0) throw std::invalid_argument("DE CR must lie in [0, 1]");
  if (strategy != "best/2/bin") throw std::invalid_argument("unsupported DE strategy: " + strategy);
  if (!initial_population.empty() && static_cast<int>(initial_population.size()) != popsize)
    throw std::invalid_argument("DE initial population size differs from popsize");
}

void BhParams::validate() const {
  if (t_max < 1) throw std::invalid_argument("BH t_max must be >= 1");
  if (!(temperature > 0.0)) throw std::invalid_argument("BH temperature must be > 0");
  if (!(a < b)) throw std::invalid_argument("BH perturbation bounds need a < b");
  if (local_t_max < 1) throw std::invalid_argument("BH local_t_max must be >= 1");
}

OptRun nelder_mead(const Objective& f, double x0, int t_max, double tol, double success_radius) {
  if (t_max < 1) throw std::invalid_argument("t_max must be >= 1");
  const auto start = Clock::now();
  constexpr double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
  // Initial simplex as in common toolkits: 5% perturbation, or 0.00025 at the origin.
  double b = x0, w = x0 != 0.0 ? 1.05 * x0 : 0.00025;
  double fb = f(b), fw = f(w);
  OptRun run;
  for (int t = 0; t < t_max; ++t) {
    if (fw < fb) {
      std::swap(b, w);
      std::swap(fb, fw);
    }
    run.iterations = t + 1;
    const double xr = b + alpha * (b - w);
    const double fr = f(xr);
    if (fr < fb) {
      const double xe = b + gamma * (xr - b);
      const double fe = f(xe);
      if (fe < fr) {
        w = xe;
        fw = fe;
      } else {
        w = xr;
        fw = fr;
      }
    } else {
      const bool outside = fr < fw;
      const double xc = outside ? b + rho * (xr - b) : b + rho * (w - b);
      const double fc = f(xc);
      if (outside ? fc <= fr : fc < fw) {
        w = xc;
        fw = fc;
      } else {
        w = b + sigma * (w - b);
        fw = f(w);
      }
    }
    if (std::abs(w - b) < tol) {
      run.converged = true;
      break;
    }
  }
  run.x_final = fw < fb ? w : b;
  return finish(run, f, success_radius, start);
}

OptRun conjugate_gradient(const Objective& f, const Objective& grad, double x0, int t_max,
                          double success_radius) {
  if (t_max < 1) throw std::invalid_argument("t_max must be >= 1");
  const auto start = Clock::now();
  OptRun run;
  double x = x0, fx = f(x), g = grad(x);
  double d = -g;
  for (int t = 0; t < t_max; ++t) {
    if (std::abs(g) < kGradientTolerance) {
      run.converged = true;
      break;
    }
    run.iterations = t + 1;
    if (t % kRestartEvery == 0 || d * g >= 0.0) d = -g;
    const double alpha = line_search(f, grad, x, fx, g, d);
    const double x_new = x + alpha * d;
    const double f_new = f(x_new);
    if (f_new > fx) break;  // no progress possible along d
    const double g_new = grad(x_new);
    const double step = std::abs(x_new - x);
    const double beta = (g_new * g_new) / (g * g);
    d = -g_new + beta * d;
    x = x_new;
    fx = f_new;
    g = g_new;
    if (step < kStepTolerance) {
      run.converged = true;
      break;
    }
  }
  run.x_final = x;
  return finish(run, f, success_radius, start);
}

OptRun basin_hopping(const Objective& f, const Objective& grad, double x0, const BhParams& params,
                     std::uint64_t seed, double success_radius) {
  params.validate();
  const auto start = Clock::now();
  Rng rng(seed);
  double cur = conjugate_gradient(f, grad, x0, params.local_t_max).x_final;
  double f_cur = f(cur);
  double best = cur, f_best = f_cur;
  OptRun run;
  for (int t = 0; t < params.t_max; ++t) {
    run.iterations = t + 1;
    const double trial = conjugate_gradient(f, grad, cur + rng.uniform(params.a, params.b),
                                            params.local_t_max)
                             .x_final;
    const double f_trial = f(trial);
    const double u = rng.uniform();
    if (f_trial <= f_cur || u < std::exp(-(f_trial - f_cur) / params.temperature)) {
      cur = trial;
      f_cur = f_trial;
    }
    if (f_cur < f_best) {
      best = cur;
      f_best = f_cur;
    }
  }
  run.x_final = best;
  run.converged = true;
  return finish(run, f, success_radius, start);
}

OptRun differential_evolution(const Objective& f, double lower, double upper,
                              const DeParams& params, std::uint64_t seed, double success_radius) {
  params.validate();
  if (!(lower < upper)) throw std::invalid_argument("DE bounds need lower < upper");
  const auto start = Clock::now();
  Rng rng(seed);
  const int p = params.popsize;
  std::vector<double> pop = params.initial_population;
  if (pop.empty()) {
    pop.resize(static_cast<std::size_t>(p));
    for (auto& x : pop) x = rng.uniform(lower, upper);
  }
  std::vector<double> fit(pop.size());
  for (std::size_t i = 0; i < pop.size(); ++i) fit[i] = f(pop[i]);

  auto best_index = [&] {
    return static_cast<std::size_t>(std::min_element(fit.begin(), fit.end()) - fit.begin());
  };
  auto pick = [&](std::size_t exclude, std::vector<std::size_t>& taken) {
    for (;;) {
      const auto r = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(p)));
      if (r == exclude || std::find(taken.begin(), taken.end(), r) != taken.end()) continue;
      taken.push_back(r);
      return r;
    }
  };

  OptRun run;
  for (int g = 0; g < params.g_max; ++g) {
    double mean = 0.0;
    for (double v : fit) mean += v;
    mean /= p;
    if (mean < params.tol) {
      run.converged = true;
      break;
    }
    run.iterations = g + 1;
    const double x_best = pop[best_index()];
    std::vector<double> next = pop;
    std::vector<double> next_fit = fit;
    for (std::size_t i = 0; i < pop.size(); ++i) {
      std::vector<std::size_t> taken;
      const auto r1 = pick(i, taken), r2 = pick(i, taken), r3 = pick(i, taken), r4 = pick(i, taken);
      const double mutant = x_best + params.f * (pop[r1] + pop[r2] - pop[r3] - pop[r4]);
      // With a single coordinate, binomial crossover always keeps the mutant.
      const double trial = std::clamp(mutant, lower, upper);
      const double f_trial = f(trial);
      if (f_trial <= fit[i]) {
        next[i] = trial;
        next_fit[i] = f_trial;
      }
    }
    pop = std::move(next);
    fit = std::move(next_fit);
  }
  run.x_final = pop[best_index()];
  return finish(run, f, success_radius, start);
}

std::string to_string(Algorithm algo) {
  switch (algo) {
    case Algorithm::NelderMead: return "nm";
    case Algorithm::ConjugateGradient: return "cgd";
    case Algorithm::BasinHopping: return "bh";
    case Algorithm::DifferentialEvolution: return "de";
  }
  return "";
}

Algorithm algorithm_from_string(const std::string& name) {
  if (name == "nm") return Algorithm::NelderMead;
  if (name == "cgd") return Algorithm::ConjugateGradient;
  if (name == "bh") return Algorithm::BasinHopping;
  if (name == "de") return Algorithm::DifferentialEvolution;
  throw std::invalid_argument("unknown algorithm: " + name);
}

std::vector<BenchmarkRow> benchmark_sweep(const PotentialSpec& spec, Algorithm algo, int n_init,
                                          const std::vector<int>& t_max_list, std::uint64_t seed,
                                          const BenchmarkOptions& options) {
  if (n_init < 1) throw std::invalid_argument("n_init must be >= 1");
  spec.validate();
  const auto pot = Potential::rastrigin(spec);
  std::vector<BenchmarkRow> rows;
  for (std::size_t ti = 0; ti < t_max_list.size(); ++ti) {
    const int t_max = t_max_list[ti];
    BenchmarkRow row;
    row.t_max = t_max;
    row.n_init = n_init;
    double hits = 0.0, f_sum = 0.0, wall = 0.0;
    for (int i = 0; i < n_init; ++i) {
      Rng init(derive_seed(seed, {0, static_cast<std::uint64_t>(i)}));
      const double x0 = init.uniform(spec.x_min, spec.x_max);
      const auto run_seed = derive_seed(seed, {1, ti, static_cast<std::uint64_t>(i)});
      OptRun r;
      switch (algo) {
        case Algorithm::NelderMead:
          r = nelder_mead(pot.value, x0, t_max, kStepTolerance, options.success_radius);
          break;
        case Algorithm::ConjugateGradient:
          r = conjugate_gradient(pot.value, pot.gradient, x0, t_max, options.success_radius);
          break;
        case Algorithm::BasinHopping: {
          BhParams bh = options.bh;
          bh.t_max = t_max;
          r = basin_hopping(pot.value, pot.gradient, x0, bh, run_seed, options.success_radius);
          break;
        }
        case Algorithm::DifferentialEvolution: {
          DeParams de;
          de.popsize = options.de_popsize;
          de.g_max = t_max;
          r = differential_evolution(pot.value, spec.x_min, spec.x_max, de, run_seed,
                                     options.success_radius);
          break;
        }
      }
      hits += r.success ? 1.0 : 0.0;
      f_sum += r.f_final;
      wall += r.wall_time;
    }
    row.p_gs = hits / n_init;
    row.e_abs = std::abs(f_sum / n_init);
    row.mean_wall_time = wall / n_init;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace dwqa
