#pragma once

// Reference implementations used only by the tests: exhaustive enumeration,
// a dense state-vector integrator and finite differences.

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "dwqa/encoding.hpp"
#include "dwqa/exact.hpp"

namespace dwqa::oracle {

/// Configuration for basis index k; site 0 is the most significant bit, 1 = up.
SpinConfig config_from_index(int n_spins, std::size_t index);

/// Every configuration with its energy, sorted by (energy, config).
std::vector<Level> enumerate_levels(const ChainInstance& chain);

/// Boltzmann averages by direct summation over all 2^N states.
ThermalPoint enumerate_thermal(const ChainInstance& chain, double temperature);

/// Diagonal of H_0 in the computational basis.
Eigen::VectorXd h0_diagonal(const ChainInstance& chain);

/// |+...+> in the computational basis.
Eigen::VectorXcd plus_state(int n_spins);

/// Integrates i d/dt psi = H(t / t_a) psi with H(s) = s H_0 - (1 - s) sum_i sigma_x_i
/// by classical RK4 with n_steps equal steps.
Eigen::VectorXcd integrate_anneal(const ChainInstance& chain, double t_a, int n_steps);

double dense_energy(const Eigen::VectorXcd& psi, const Eigen::VectorXd& diag);

/// Fourth-order central difference.
double central_difference(const std::function<double(double)>& f, double x, double h);

/// Random chain with fields in [-amp, amp] on an N-site grid over [-1, 1].
ChainInstance random_chain(int n_spins, std::uint64_t seed, double amp = 1.0);

}  // namespace dwqa::oracle
