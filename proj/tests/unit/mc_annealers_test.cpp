#include <cmath>
#include <numbers>
#include <numeric>

#include <gtest/gtest.h>

#include "dwqa/exact.hpp"
#include "dwqa/mc_annealers.hpp"
#include "dwqa/observables.hpp"
#include "oracles.hpp"

using namespace dwqa;

namespace {

ChainInstance small_chain(int n = 16, double h0 = 1.0) {
  PotentialSpec s;
  s.h0 = h0;
  return build_chain(s, n, 1.0);
}

std::vector<double> energies_of(const RunBatch& b, const ChainInstance& chain) {
  std::vector<double> e;
  for (const auto& c : b.samples) e.push_back(classical_energy(chain, c));
  return e;
}

}  // namespace

TEST(Rng, DerivedSeedsAreDistinctAndStable) {
  EXPECT_EQ(derive_seed(7, {1, 2}), derive_seed(7, {1, 2}));
  EXPECT_NE(derive_seed(7, {1, 2}), derive_seed(7, {2, 1}));
  EXPECT_NE(derive_seed(7, {0}), derive_seed(8, {0}));
  Rng r(3);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_LT(r.below(5), 5u);
  }
}

TEST(SaParams, TemperatureScheduleEndpoints) {
  SaParams p;
  p.t_mcs = 11;
  EXPECT_DOUBLE_EQ(p.temperature(0), 1.0);
  EXPECT_DOUBLE_EQ(p.temperature(10), 1e-5);
  p.t_mcs = 0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = SaParams{};
  p.t1 = -1.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(SimulatedAnnealing, SameSeedSameSamples) {
  const auto chain = small_chain(24);
  SaParams p;
  p.t_mcs = 30;
  const auto a = sa_run(chain, p, 50, 42);
  const auto b = sa_run(chain, p, 50, 42);
  const auto c = sa_run(chain, p, 50, 43);
  EXPECT_EQ(a.samples, b.samples);
  EXPECT_NE(a.samples, c.samples);
  EXPECT_EQ(a.samples.size(), 50u);
  EXPECT_EQ(a.protocol, "sa");
}

TEST(SimulatedAnnealing, SlowAnnealReachesGroundStateOfSmallChain) {
  const auto chain = small_chain(12, 0.2);
  const auto gs = ground_state_dp(chain);
  SaParams p;
  p.t_mcs = 3000;
  const auto b = sa_run(chain, p, 40, 5);
  EXPECT_GT(ground_state_probability(b.samples, gs.ground_set), 0.9);
}

TEST(SimulatedAnnealing, LongerAnnealsLeaveFewerKinks) {
  const auto chain = small_chain(211, 0.2);
  SaParams fast, slow;
  fast.t_mcs = 2;
  slow.t_mcs = 100;
  const auto a = sa_run(chain, fast, 100, 1);
  const auto b = sa_run(chain, slow, 100, 1);
  EXPECT_GT(kink_density(a.samples), 2.0 * kink_density(b.samples));
}

TEST(FixedTemperature, MeanEnergyMatchesTransferMatrix) {
  const auto chain = small_chain(10, 1.0);
  const double t = 0.8;
  const auto run = metropolis_fixed(chain, t, 200000, 9);
  ASSERT_EQ(run.energies.size(), 200000u);
  const double mean =
      std::accumulate(run.energies.begin() + 1000, run.energies.end(), 0.0) / (run.energies.size() - 1000);
  EXPECT_NEAR(mean, oracle::enumerate_thermal(chain, t).internal_energy, 0.05);
}

TEST(FixedTemperature, RecordedEnergiesMatchSamples) {
  const auto chain = small_chain(10, 1.0);
  const auto run = metropolis_fixed(chain, 1.0, 100, 2, 10);
  ASSERT_EQ(run.samples.size(), 10u);
  for (std::size_t k = 0; k < run.samples.size(); ++k)
    EXPECT_NEAR(classical_energy(chain, run.samples[k]), run.energies[10 * k + 9], 1e-9);
}

TEST(SqaParams, ReplicaCouplingValues) {
  SqaParams p;
  p.trotter_m = 100;
  p.beta = 100.0;
  EXPECT_NEAR(p.replica_coupling(0.0), 0.5 * std::log(std::tanh(1.0)), 1e-14);
  EXPECT_LT(p.replica_coupling(0.5), p.replica_coupling(0.0));
  EXPECT_TRUE(std::isfinite(p.replica_coupling(1.0)));
  p.trotter_m = 0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(SimulatedQuantumAnnealing, ReplicasBecomeSamplesDeterministically) {
  const auto chain = small_chain(20);
  SqaParams p;
  p.t_mcs = 20;
  p.trotter_m = 16;
  p.beta = 16.0;
  const auto a = sqa_run(chain, p, 3);
  const auto b = sqa_run(chain, p, 3);
  EXPECT_EQ(a.samples.size(), 16u);
  EXPECT_EQ(a.samples, b.samples);
  EXPECT_EQ(a.protocol, "sqa");
}

TEST(SimulatedQuantumAnnealing, SlowAnnealFindsSmallChainGroundState) {
  const auto chain = small_chain(10, 0.2);
  const auto gs = ground_state_dp(chain);
  SqaParams p;
  p.t_mcs = 2000;
  p.trotter_m = 32;
  p.beta = 32.0;
  const auto b = sqa_run(chain, p, 11);
  EXPECT_GT(ground_state_probability(b.samples, gs.ground_set), 0.8);
}

TEST(Svmc, TfdHalfWidth) {
  EXPECT_DOUBLE_EQ(tfd_half_width(0.0), std::numbers::pi);
  EXPECT_DOUBLE_EQ(tfd_half_width(0.5), std::numbers::pi);
  EXPECT_NEAR(tfd_half_width(0.75), std::numbers::pi / 3.0, 1e-14);
  EXPECT_DOUBLE_EQ(tfd_half_width(1.0), 0.0);
}

TEST(Svmc, ProjectionBySignOfCosine) {
  Rng rng(1);
  RotorConfig r{{0.0, std::numbers::pi, 0.3, 2.9}};
  EXPECT_EQ(project_rotors(r, rng), (SpinConfig{1, -1, 1, -1}));
  int ups = 0;
  for (int k = 0; k < 2000; ++k) {
    RotorConfig z{{std::numbers::pi / 2}};
    ups += project_rotors(z, rng)[0] > 0;
  }
  EXPECT_NEAR(ups / 2000.0, 0.5, 0.05);
}

TEST(Svmc, DeterministicAndUpdateRuleNames) {
  const auto chain = small_chain(20);
  SvmcParams p;
  p.t_mcs = 50;
  EXPECT_EQ(svmc_run(chain, p, 10, 4).samples, svmc_run(chain, p, 10, 4).samples);
  EXPECT_EQ(svmc_update_from_string("tfd"), SvmcUpdate::TFD);
  EXPECT_EQ(to_string(SvmcUpdate::Uniform), "uniform");
  EXPECT_THROW(svmc_update_from_string("metropolis"), std::invalid_argument);
}

TEST(Svmc, SlowAnnealLowersEnergy) {
  const auto chain = small_chain(40, 0.2);
  SvmcParams fast, slow;
  fast.t_mcs = 5;
  slow.t_mcs = 2000;
  const auto a = energies_of(svmc_run(chain, fast, 20, 8), chain);
  const auto b = energies_of(svmc_run(chain, slow, 20, 8), chain);
  EXPECT_LT(mean_of(b), mean_of(a));
}
