#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include "dwqa/exact.hpp"
#include "dwqa/mps.hpp"
#include "dwqa/tebd.hpp"
#include "oracles.hpp"

using namespace dwqa;

namespace {

ChainInstance paper_chain(int n, double h0 = 0.2) {
  PotentialSpec s;
  s.h0 = h0;
  return build_chain(s, n, 1.0);
}

double dense_overlap(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  return std::abs(a.dot(b)) / (a.norm() * b.norm());
}

}  // namespace

TEST(Mps, ProductStateAmplitudes) {
  const auto psi = MpsState::from_config(SpinConfig{-1, 1, 1, -1});
  EXPECT_NEAR(std::abs(psi.amplitude(SpinConfig{-1, 1, 1, -1})), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(psi.amplitude(SpinConfig{1, 1, 1, -1})), 0.0, 1e-14);
  EXPECT_NEAR(psi.norm(), 1.0, 1e-14);
  EXPECT_EQ(psi.max_bond_dimension(), 1);
}

TEST(Mps, PlusStateDenseAndObservables) {
  const auto psi = init_plus_state(6);
  const auto dense = psi.to_dense();
  EXPECT_LT((dense - oracle::plus_state(6)).norm(), 1e-13);
  for (double z : psi.site_z()) EXPECT_NEAR(z, 0.0, 1e-14);
  for (double zz : psi.bond_zz()) EXPECT_NEAR(zz, 0.0, 1e-14);
  // 5 correctly oriented single-kink states of 64
  EXPECT_NEAR(constraint_probability(psi), 5.0 / 64.0, 1e-14);
}

TEST(Mps, CenterMovesPreserveState) {
  auto chain = paper_chain(8);
  TebdParams p;
  p.t_a = 2.0;
  auto psi = tebd_anneal(chain, p);
  const auto before = psi.to_dense();
  for (int c : {0, 7, 3}) {
    psi.move_center(c);
    EXPECT_EQ(psi.center(), c);
    EXPECT_LT((psi.to_dense() - before).norm(), 1e-12);
  }
}

TEST(BondGate, IsUnitary) {
  const auto chain = paper_chain(8);
  for (int bond : {0, 3, 6}) {
    const auto g = bond_gate(chain, bond, 0.37, 0.05);
    EXPECT_LT((g.adjoint() * g - MpsState::Gate::Identity()).norm(), 1e-13);
  }
}

TEST(TebdParams, StepRounding) {
  TebdParams p;
  p.t_a = 1.0;
  p.dt = 0.025;
  EXPECT_EQ(p.n_steps(), 40);
  p.t_a = 1.01;
  EXPECT_EQ(p.n_steps(), 41);
  p.chi_max = 0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(Tebd, MatchesDenseIntegratorSmallChain) {
  const auto chain = paper_chain(8);
  const auto diag = oracle::h0_diagonal(chain);
  for (double t_a : {1.0, 5.0}) {
    TebdParams p;
    p.t_a = t_a;
    p.dt = 0.005;
    p.chi_max = 16;
    p.svd_cutoff = 0.0;
    const auto psi = tebd_anneal(chain, p);
    const auto ref = oracle::integrate_anneal(chain, t_a, static_cast<int>(t_a * 2000));
    const auto mine = psi.to_dense();
    EXPECT_GT(dense_overlap(mine, ref), 1.0 - 1e-6) << t_a;
    EXPECT_NEAR(energy_expectation(psi, chain), oracle::dense_energy(ref, diag), 1e-4) << t_a;
  }
}

TEST(Tebd, TrotterErrorIsSecondOrder) {
  const auto chain = paper_chain(6);
  const auto ref = oracle::integrate_anneal(chain, 3.0, 30000);
  auto err = [&](double dt) {
    TebdParams p;
    p.t_a = 3.0;
    p.dt = dt;
    p.svd_cutoff = 0.0;
    return (tebd_anneal(chain, p).to_dense() - ref).norm();
  };
  const double e1 = err(0.1), e2 = err(0.05);
  EXPECT_NEAR(e1 / e2, 4.0, 0.6);
}

TEST(Tebd, ObservablesMatchDenseState) {
  const auto chain = paper_chain(8);
  TebdParams p;
  p.t_a = 4.0;
  const auto psi = tebd_anneal(chain, p);
  const auto dense = psi.to_dense();
  const auto gs = ground_state_dp(chain);
  double p_gs = 0.0, p_const = 0.0, kinks = 0.0;
  for (Eigen::Index k = 0; k < dense.size(); ++k) {
    const auto c = oracle::config_from_index(8, static_cast<std::size_t>(k));
    const double w = std::norm(dense(k));
    if (domain_wall_bond(c)) p_const += w;
    for (const auto& g : gs.ground_set)
      if (g == c) p_gs += w;
    kinks += w * kink_count(c);
  }
  const auto obs = measure_observables(psi, chain, gs);
  EXPECT_NEAR(obs.p_const, p_const, 1e-12);
  EXPECT_NEAR(obs.p_gs, p_gs, 1e-12);
  EXPECT_NEAR(obs.rho, kinks / 8.0, 1e-12);
  EXPECT_NEAR(obs.e_res, (obs.energy - gs.e0) / 8.0, 1e-12);
  EXPECT_NEAR(probability_of_config(psi, gs.ground_set.front()), p_gs / gs.ground_set.size(), 1e-12);
}

TEST(Tebd, TruncationRecordsDiscardedWeight) {
  const auto chain = paper_chain(16);
  TebdParams p;
  p.t_a = 5.0;
  p.chi_max = 2;
  const auto psi = tebd_anneal(chain, p);
  EXPECT_LE(psi.max_bond_dimension(), 2);
  EXPECT_GT(psi.truncation_error(), 0.0);
  EXPECT_NEAR(psi.norm(), 1.0, 1e-10);
  p.chi_max = 64;
  EXPECT_LT(tebd_anneal(chain, p).truncation_error(), 1e-6);
}

TEST(Tebd, ObserverSeesEveryStep) {
  const auto chain = paper_chain(6);
  TebdParams p;
  p.t_a = 1.0;
  p.dt = 0.1;
  int calls = 0;
  double last_s = 0.0;
  tebd_anneal(chain, p, [&](int, double s, const MpsState&) {
    ++calls;
    last_s = s;
  });
  EXPECT_EQ(calls, 10);
  EXPECT_DOUBLE_EQ(last_s, 1.0);
}

TEST(Tebd, SlowAnnealApproachesGroundState) {
  const auto chain = paper_chain(8);
  TebdParams p;
  p.t_a = 200.0;
  p.dt = 0.05;
  const auto gs = ground_state_dp(chain);
  const auto obs = measure_observables(tebd_anneal(chain, p), chain, gs);
  EXPECT_GT(obs.p_gs, 0.9);
}
