#pragma once

#include <functional>
#include <vector>

#include "dwqa/exact.hpp"
#include "dwqa/mps.hpp"

namespace dwqa {

/// Coherent annealing under H(s) = (B(s)/2) H_0 - (A(s)/2) sum_i sigma_x_i
/// with A = 2(1 - s), B = 2s and s = t / t_a. Time in units of 1/J.
struct TebdParams {
  double dt = 0.025;
  int chi_max = 32;
  /// Maximum discarded weight (sum of squared singular values) per truncation.
  double svd_cutoff = 1e-10;
  double t_a = 1.0;

  void validate() const;
  /// ceil(t_a / dt); the step actually used is t_a / n_steps.
  int n_steps() const;
};

MpsState init_plus_state(int n_spins);

/// Two-site gate exp(-i tau h_bond(s)) for bond (i, i+1).
MpsState::Gate bond_gate(const ChainInstance& chain, int bond, double s, double tau);

/// Called after every Trotter step with (step index, s at the end of the step, state).
using TebdObserver = std::function<void(int, double, const MpsState&)>;

MpsState tebd_anneal(const ChainInstance& chain, const TebdParams& params,
                     const TebdObserver& observer = {});

std::vector<double> measure_bond_correlators(const MpsState& state);
double probability_of_config(const MpsState& state, const SpinConfig& config);
/// Probability of the correctly oriented single-kink configurations.
double constraint_probability(const MpsState& state);
/// <psi| H_0 |psi>
double energy_expectation(const MpsState& state, const ChainInstance& chain);

struct TebdObservables {
  double rho = 0.0;
  double p_const = 0.0;
  double e_res = 0.0;
  double p_gs = 0.0;
  double energy = 0.0;
  double truncation_error = 0.0;
  int max_bond = 0;
};

TebdObservables measure_observables(const MpsState& state, const ChainInstance& chain,
                                    const GroundState& ground);

}  // namespace dwqa
