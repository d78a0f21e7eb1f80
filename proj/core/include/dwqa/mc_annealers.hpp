#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dwqa/encoding.hpp"
#include "dwqa/rng.hpp"

namespace dwqa {

/// Simulated annealing with T(t) = T0 + (T1 - T0) t / (t_mcs - 1).
struct SaParams {
  int t_mcs = 100;
  double t0 = 1.0;
  double t1 = 1e-5;

  void validate() const;
  double temperature(int t) const;
};

/// Path-integral SQA. Each replica carries H_0 weighted by B(s)/2 and the
/// replicas are coupled along the (periodic) Trotter direction with
/// (M / 2 beta) ln tanh(beta A(s) / 2M); both sit at temperature M / beta.
struct SqaParams {
  int t_mcs = 100;
  int trotter_m = 1000;
  double beta = 1000.0;
  double a_floor = 1e-12;

  void validate() const;
  /// Trotter coupling coefficient at schedule point s (<= 0).
  double replica_coupling(double s) const;
};

enum class SvmcUpdate { Uniform, TFD };

std::string to_string(SvmcUpdate rule);
SvmcUpdate svmc_update_from_string(const std::string& name);

struct SvmcParams {
  int t_mcs = 100;
  double temperature = 1e-5;
  SvmcUpdate update_rule = SvmcUpdate::TFD;

  void validate() const;
};

/// Half-width of the TFD proposal window, min(1, A(s)/B(s)) * pi.
double tfd_half_width(double s);

struct RotorConfig {
  std::vector<double> angles;  // each in [0, pi]
};

/// Projects rotors to spins by the sign of cos(theta); exact zeros get a fair coin.
SpinConfig project_rotors(const RotorConfig& rotors, Rng& rng);

struct RunBatch {
  std::vector<SpinConfig> samples;
  std::uint64_t seed = 0;
  std::string protocol;
  std::map<std::string, double> schedule;
};

RunBatch sa_run(const ChainInstance& chain, const SaParams& params, int n_reads,
                std::uint64_t seed);

/// One SQA run; every replica's final configuration becomes a sample.
RunBatch sqa_run(const ChainInstance& chain, const SqaParams& params, std::uint64_t seed);

RunBatch svmc_run(const ChainInstance& chain, const SvmcParams& params, int n_reads,
                  std::uint64_t seed);

/// Single Metropolis chain at a fixed temperature from a random start.
/// Records the energy after every sweep and a configuration every
/// sample_every sweeps (0 disables configuration sampling).
struct FixedTemperatureRun {
  std::vector<double> energies;
  std::vector<SpinConfig> samples;
};

FixedTemperatureRun metropolis_fixed(const ChainInstance& chain, double temperature,
                                     int n_sweeps, std::uint64_t seed, int sample_every = 0);

}  // namespace dwqa
