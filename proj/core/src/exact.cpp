#include "dwqa/exact.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace dwqa {

namespace {

constexpr std::array<int, 2> kSpinValue{-1, +1};
constexpr std::size_t kMaxGroundSet = 1u << 20;

double site_energy(const ChainInstance& chain, int site, int spin) {
  return chain.local_field(site) * spin;
}

double bond_energy(const ChainInstance& chain, int left, int right) {
  return -chain.coupling_j() * left * right;
}

double log_sum_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

}  // namespace

GroundState ground_state_dp(const ChainInstance& chain) {
  const int n = chain.n_spins();
  // best[i][b]: minimum energy of sites 0..i with spin kSpinValue[b] at site i.
  std::vector<std::array<double, 2>> best(static_cast<std::size_t>(n));
  for (int b = 0; b < 2; ++b) best[0][b] = site_energy(chain, 0, kSpinValue[b]);
  for (int i = 1; i < n; ++i) {
    for (int b = 0; b < 2; ++b) {
      double lowest = std::numeric_limits<double>::infinity();
      for (int a = 0; a < 2; ++a) {
        lowest = std::min(lowest, best[i - 1][a] + bond_energy(chain, kSpinValue[a], kSpinValue[b]));
      }
      best[i][b] = lowest + site_energy(chain, i, kSpinValue[b]);
    }
  }
  const auto& last = best.back();
  GroundState out;
  out.e0 = std::min(last[0], last[1]);

  // Backtrack every path whose accumulated slack stays within tolerance.
  SpinConfig config(static_cast<std::size_t>(n));
  std::function<void(int, int, double)> walk = [&](int site, int b, double slack) {
    config.set(static_cast<std::size_t>(site), static_cast<std::int8_t>(kSpinValue[b]));
    if (site == 0) {
      if (out.ground_set.size() >= kMaxGroundSet) {
        throw std::runtime_error("ground_state_dp: ground set exceeds enumeration cap");
      }
      out.ground_set.push_back(config);
      return;
    }
    const double here = best[site][b] - site_energy(chain, site, kSpinValue[b]);
    for (int a = 0; a < 2; ++a) {
      const double via = best[site - 1][a] + bond_energy(chain, kSpinValue[a], kSpinValue[b]);
      const double extra = slack + (via - here);
      if (extra <= kDegeneracyTolerance) walk(site - 1, a, extra);
    }
  };
  for (int b = 0; b < 2; ++b) {
    const double slack = last[b] - out.e0;
    if (slack <= kDegeneracyTolerance) walk(n - 1, b, slack);
  }
  std::sort(out.ground_set.begin(), out.ground_set.end());
  return out;
}

namespace {

struct Partial {
  double energy;
  std::int32_t prev_rank;
  std::int8_t prev_spin;  // index into kSpinValue
};

std::vector<Level> k_best_raw(const ChainInstance& chain, std::size_t m) {
  const int n = chain.n_spins();
  std::vector<std::array<std::vector<Partial>, 2>> layers(static_cast<std::size_t>(n));
  for (int b = 0; b < 2; ++b) layers[0][b] = {Partial{site_energy(chain, 0, kSpinValue[b]), -1, -1}};

  for (int i = 1; i < n; ++i) {
    for (int b = 0; b < 2; ++b) {
      const auto& from_down = layers[i - 1][0];
      const auto& from_up = layers[i - 1][1];
      const double f = site_energy(chain, i, kSpinValue[b]);
      const double c_down = bond_energy(chain, kSpinValue[0], kSpinValue[b]) + f;
      const double c_up = bond_energy(chain, kSpinValue[1], kSpinValue[b]) + f;
      auto& out = layers[i][b];
      out.reserve(std::min(m, from_down.size() + from_up.size()));
      std::size_t p = 0;
      std::size_t q = 0;
      while (out.size() < m && (p < from_down.size() || q < from_up.size())) {
        const bool take_down =
            q >= from_up.size() ||
            (p < from_down.size() && from_down[p].energy + c_down <= from_up[q].energy + c_up);
        if (take_down) {
          out.push_back({from_down[p].energy + c_down, static_cast<std::int32_t>(p), 0});
          ++p;
        } else {
          out.push_back({from_up[q].energy + c_up, static_cast<std::int32_t>(q), 1});
          ++q;
        }
      }
    }
  }

  const auto& end_down = layers.back()[0];
  const auto& end_up = layers.back()[1];
  std::vector<Level> levels;
  levels.reserve(std::min(m, end_down.size() + end_up.size()));
  std::size_t p = 0;
  std::size_t q = 0;
  while (levels.size() < m && (p < end_down.size() || q < end_up.size())) {
    const bool take_down =
        q >= end_up.size() || (p < end_down.size() && end_down[p].energy <= end_up[q].energy);
    int b = take_down ? 0 : 1;
    std::int32_t rank = static_cast<std::int32_t>(take_down ? p++ : q++);
    Level level;
    level.energy = layers.back()[b][static_cast<std::size_t>(rank)].energy;
    level.config = SpinConfig(static_cast<std::size_t>(n));
    for (int i = n - 1; i >= 0; --i) {
      const Partial& node = layers[i][b][static_cast<std::size_t>(rank)];
      level.config.set(static_cast<std::size_t>(i), static_cast<std::int8_t>(kSpinValue[b]));
      b = node.prev_spin;
      rank = node.prev_rank;
    }
    levels.push_back(std::move(level));
  }
  return levels;
}

double state_count(int n) { return std::ldexp(1.0, n); }

}  // namespace

std::vector<Level> k_lowest_states(const ChainInstance& chain, std::size_t m) {
  if (m < 1) throw std::invalid_argument("k_lowest_states: m must be >= 1");
  const double total = state_count(chain.n_spins());
  if (static_cast<double>(m) > total) {
    throw std::invalid_argument("k_lowest_states: m exceeds 2^N");
  }

  // Pull in extra levels until the tail is strictly above the m-th energy,
  // so a tie straddling position m is resolved by config order, not by DP order.
  std::size_t margin = 8;
  std::vector<Level> levels;
  for (;;) {
    const std::size_t want =
        static_cast<std::size_t>(std::min(static_cast<double>(m + margin), total));
    levels = k_best_raw(chain, want);
    for (auto& level : levels) level.energy = classical_energy(chain, level.config);
    std::stable_sort(levels.begin(), levels.end(), [](const Level& a, const Level& b) {
      if (a.energy != b.energy) return a.energy < b.energy;
      return a.config < b.config;
    });
    if (levels.size() <= m || static_cast<double>(want) >= total) break;
    const double cut = levels[m - 1].energy;
    const double tie_scale = kDegeneracyTolerance * std::max(1.0, std::abs(cut));
    if (levels.back().energy > cut + tie_scale) break;
    margin *= 2;
  }
  if (levels.size() > m) levels.resize(m);
  return levels;
}

int compute_n_enc(const ChainInstance& chain) {
  const double total = state_count(chain.n_spins());
  std::size_t m = static_cast<std::size_t>(std::min(total, 2.0 * chain.n_spins()));
  for (;;) {
    const auto levels = k_lowest_states(chain, m);
    for (std::size_t j = 0; j < levels.size(); ++j) {
      if (kink_count(levels[j].config) != 1) return static_cast<int>(j);
    }
    if (static_cast<double>(m) >= total) return static_cast<int>(levels.size());
    m = static_cast<std::size_t>(std::min(total, 2.0 * static_cast<double>(m)));
  }
}

SpectrumSummary spectrum_summary(const ChainInstance& chain) {
  SpectrumSummary out;
  auto ground = ground_state_dp(chain);
  out.e0 = ground.e0;
  out.ground_set = std::move(ground.ground_set);
  const double total = state_count(chain.n_spins());
  const auto want =
      static_cast<std::size_t>(std::min(total, static_cast<double>(out.ground_set.size() + 1)));
  const auto levels = k_lowest_states(chain, want);
  out.e1 = out.e0;
  for (const auto& level : levels) {
    if (level.energy > out.e0 + kDegeneracyTolerance) {
      out.e1 = level.energy;
      break;
    }
  }
  out.n_enc = compute_n_enc(chain);
  return out;
}

namespace {

struct LogForward {
  double log_z;
  double mean_energy;
};

// Log-scaled 2x2 transfer-matrix recursion. For each site and spin it keeps
// ln of the partial partition sum and the conditional mean partial energy.
LogForward log_forward(const ChainInstance& chain, double beta) {
  const int n = chain.n_spins();
  std::array<double, 2> log_w{};
  std::array<double, 2> mean{};
  for (int b = 0; b < 2; ++b) {
    const double e = site_energy(chain, 0, kSpinValue[b]);
    log_w[b] = -beta * e;
    mean[b] = e;
  }
  for (int i = 1; i < n; ++i) {
    std::array<double, 2> next_log{};
    std::array<double, 2> next_mean{};
    for (int b = 0; b < 2; ++b) {
      const double f = site_energy(chain, i, kSpinValue[b]);
      std::array<double, 2> terms{};
      for (int a = 0; a < 2; ++a) {
        terms[a] = log_w[a] - beta * (bond_energy(chain, kSpinValue[a], kSpinValue[b]) + f);
      }
      const double total = log_sum_exp(terms[0], terms[1]);
      double m = 0.0;
      for (int a = 0; a < 2; ++a) {
        const double weight = std::exp(terms[a] - total);
        m += weight * (mean[a] + bond_energy(chain, kSpinValue[a], kSpinValue[b]) + f);
      }
      next_log[b] = total;
      next_mean[b] = m;
    }
    log_w = next_log;
    mean = next_mean;
  }
  const double log_z = log_sum_exp(log_w[0], log_w[1]);
  double e = 0.0;
  for (int b = 0; b < 2; ++b) e += std::exp(log_w[b] - log_z) * mean[b];
  return {log_z, e};
}

}  // namespace

double internal_energy(const ChainInstance& chain, double temperature) {
  if (!(temperature > 0.0)) throw std::invalid_argument("internal_energy: T must be > 0");
  const double beta = std::isinf(temperature) ? 0.0 : 1.0 / temperature;
  return log_forward(chain, beta).mean_energy;
}

ThermalPoint thermal_point(const ChainInstance& chain, double temperature) {
  return thermal_point(chain, temperature, ground_state_dp(chain));
}

ThermalPoint thermal_point(const ChainInstance& chain, double temperature,
                           const GroundState& ground) {
  if (!(temperature > 0.0)) throw std::invalid_argument("thermal_point: T must be > 0");
  const double beta = std::isinf(temperature) ? 0.0 : 1.0 / temperature;
  const LogForward fwd = log_forward(chain, beta);

  ThermalPoint out;
  out.temperature = temperature;
  out.internal_energy = fwd.mean_energy;
  out.log_partition = fwd.log_z;
  for (const auto& config : ground.ground_set) {
    out.p_gs += std::exp(-beta * classical_energy(chain, config) - fwd.log_z);
  }
  for (int j = 1; j <= chain.n_spins() - 1; ++j) {
    const double e = classical_energy(chain, single_kink_config(chain.n_spins(), j));
    out.p_const += std::exp(-beta * e - fwd.log_z);
  }
  out.p_gs = std::clamp(out.p_gs, 0.0, 1.0);
  out.p_const = std::clamp(out.p_const, 0.0, 1.0);
  return out;
}

double effective_temperature(const ChainInstance& chain, double e_measured) {
  const double e0 = ground_state_dp(chain).e0;
  const double e_inf = internal_energy(chain, std::numeric_limits<double>::infinity());
  if (!(e_measured > e0)) {
    throw std::invalid_argument("effective_temperature: energy " + std::to_string(e_measured) +
                                " is not above the ground energy " + std::to_string(e0));
  }
  if (!(e_measured < e_inf)) {
    throw std::invalid_argument("effective_temperature: energy " + std::to_string(e_measured) +
                                " is not below the infinite-temperature energy " +
                                std::to_string(e_inf));
  }
  const double tol = 1e-9 * chain.n_spins();
  double lo = std::log(kEffTempLow);
  double hi = std::log(kEffTempHigh);
  const double e_lo = internal_energy(chain, kEffTempLow);
  const double e_hi = internal_energy(chain, kEffTempHigh);
  if (e_measured < e_lo - tol) {
    throw std::invalid_argument("effective_temperature: energy below E(T_min) of the bracket");
  }
  if (e_measured > e_hi + tol) {
    throw std::invalid_argument("effective_temperature: energy above E(T_max) of the bracket");
  }
  // Bisection in ln T; E(T) is nondecreasing so the root is unique.
  double mid = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200 && hi - lo > 1e-13; ++iter) {
    mid = 0.5 * (lo + hi);
    const double e = internal_energy(chain, std::exp(mid));
    if (e < e_measured) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double t = std::exp(0.5 * (lo + hi));
  if (std::abs(internal_energy(chain, t) - e_measured) > tol) {
    throw std::runtime_error("effective_temperature: bisection did not reach tolerance");
  }
  return t;
}

double freeze_out(double t_eff, const Schedule& problem_schedule, double t_phys) {
  if (!(t_eff > 0.0) || !(t_phys > 0.0)) {
    throw std::invalid_argument("freeze_out: t_eff and t_phys must be > 0");
  }
  const double target = 2.0 * t_phys / t_eff;  // B(s*) we are looking for
  const double b1 = problem_schedule(1.0);
  if (!(b1 > 0.0)) throw std::invalid_argument("freeze_out: B(1) must be > 0");
  if (target > b1) {
    throw std::invalid_argument("freeze_out: t_eff below 2 t_phys / B(1); no s* in (0, 1]");
  }
  if (problem_schedule(0.0) >= target) {
    throw std::invalid_argument("freeze_out: B(0) already reaches 2 t_phys / t_eff; no s* in (0, 1]");
  }
  if (b1 == target) return 1.0;
  double lo = 0.0;
  double hi = 1.0;
  for (int iter = 0; iter < 200 && hi - lo > 1e-15; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double b = problem_schedule(mid);
    if (b == target) return mid;
    if (b < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace dwqa
