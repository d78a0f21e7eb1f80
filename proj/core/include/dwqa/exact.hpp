#pragma once

#include <cstddef>
#include <vector>

#include "dwqa/encoding.hpp"
#include "dwqa/schedule.hpp"

namespace dwqa {

/// Absolute tolerance used to decide ground-state degeneracy.
inline constexpr double kDegeneracyTolerance = 1e-9;

struct GroundState {
  double e0 = 0.0;
  std::vector<SpinConfig> ground_set;  // lexicographically sorted
};

struct SpectrumSummary {
  double e0 = 0.0;
  double e1 = 0.0;  // lowest energy strictly above the ground manifold
  std::vector<SpinConfig> ground_set;
  int n_enc = 0;
};

struct Level {
  double energy = 0.0;
  SpinConfig config;
};

/// Exact minimum energy and every configuration within kDegeneracyTolerance
/// of it, by a left-to-right DP over (site, spin) with backtracking.
GroundState ground_state_dp(const ChainInstance& chain);

/// The m lowest configurations in nondecreasing energy; exact ties are
/// ordered lexicographically. Keeps the m best partial energies per
/// (site, spin) with backpointers, O(N m) memory.
std::vector<Level> k_lowest_states(const ChainInstance& chain, std::size_t m);

/// Index of the lowest level whose configuration does not have exactly one kink.
int compute_n_enc(const ChainInstance& chain);

SpectrumSummary spectrum_summary(const ChainInstance& chain);

struct ThermalPoint {
  double temperature = 0.0;
  double internal_energy = 0.0;
  double p_gs = 0.0;
  double p_const = 0.0;
  double log_partition = 0.0;  // ln Z
};

/// Boltzmann expectation values of H_0 at temperature T.
ThermalPoint thermal_point(const ChainInstance& chain, double temperature);
ThermalPoint thermal_point(const ChainInstance& chain, double temperature,
                           const GroundState& ground);

/// E(T) alone; T = +inf is allowed and gives the uniform average.
double internal_energy(const ChainInstance& chain, double temperature);

struct EffTempResult {
  double t_eff = 0.0;
  double s_star = 0.0;
  double t_phys = 0.0;
};

inline constexpr double kEffTempLow = 1e-6;
inline constexpr double kEffTempHigh = 1e4;

/// Solves E(T) = e_measured for T in [kEffTempLow, kEffTempHigh].
double effective_temperature(const ChainInstance& chain, double e_measured);

/// Solves 2 t_phys / B(s) = t_eff for s in (0, 1].
double freeze_out(double t_eff, const Schedule& problem_schedule, double t_phys);

}  // namespace dwqa
