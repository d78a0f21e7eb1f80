#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "dwqa/encoding.hpp"
#include "dwqa/potential.hpp"
#include "oracles.hpp"

using namespace dwqa;

namespace {

PotentialSpec paper_spec(double h0) {
  PotentialSpec s;
  s.h0 = h0;
  return s;
}

}  // namespace

TEST(Potential, GlobalMinimumIsZeroAtOrigin) {
  const auto s = paper_spec(1.0);
  EXPECT_DOUBLE_EQ(eval_potential(s, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(eval_gradient(s, 0.0), 0.0);
  for (double x = -3.0; x <= 3.0; x += 0.01) EXPECT_GE(eval_potential(s, x), 0.0);
}

TEST(Potential, RippleMaximumAtHalfPeriod) {
  const auto s = paper_spec(1.0);
  // k x^2 / 2 + h0 at x = w0 / 2
  EXPECT_NEAR(eval_potential(s, 0.1), 0.5 * 0.5 * 0.01 + 1.0, 1e-14);
}

TEST(Potential, GradientMatchesFiniteDifferences) {
  for (double h0 : {0.0, 0.2, 1.0, 3.0}) {
    const auto s = paper_spec(h0);
    for (double x = -2.95; x < 3.0; x += 0.173) {
      const double fd = oracle::central_difference([&](double y) { return eval_potential(s, y); }, x, 1e-4);
      EXPECT_NEAR(eval_gradient(s, x), fd, 1e-7 * (1.0 + std::abs(fd))) << "h0=" << h0 << " x=" << x;
    }
  }
}

TEST(Potential, ValidateRejectsBadParameters) {
  PotentialSpec s;
  s.k = 0.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = PotentialSpec{};
  s.w0 = -1.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = PotentialSpec{};
  s.x_min = 3.0;
  EXPECT_THROW(Potential::rastrigin(s), std::invalid_argument);
}

TEST(Grid, PaperGridHasZeroAtMidpoint) {
  const auto g = make_grid(-3.0, 3.0, 211);
  EXPECT_EQ(g.size(), 210);
  EXPECT_DOUBLE_EQ(g.delta_x, 6.0 / 210.0);
  EXPECT_DOUBLE_EQ(g.x(1), -3.0);
  EXPECT_DOUBLE_EQ(g.x(106), 0.0);
  EXPECT_THROW(make_grid(-3.0, 3.0, 2), std::invalid_argument);
}

TEST(SpinConfig, StringRoundTripAndOrdering) {
  const auto c = SpinConfig::from_string("--+-+");
  EXPECT_EQ(c.to_string(), "--+-+");
  EXPECT_EQ(kink_count(c), 3);
  EXPECT_LT(SpinConfig::from_string("-+"), SpinConfig::from_string("+-"));
}

TEST(ClassicalEnergy, ZeroLambdaSingleKinkExample) {
  // lambda = 0, N = 5, J = 1, h = 2: boundary term 2 (s1 - s5) = -4, bonds -J * 2.
  const auto chain = build_chain(PotentialSpec{}, 5, 0.0, 1.0, 2.0);
  EXPECT_DOUBLE_EQ(classical_energy(chain, SpinConfig{-1, -1, 1, 1, 1}), -6.0);
  EXPECT_DOUBLE_EQ(classical_energy(chain, SpinConfig{1, 1, 1, 1, 1}), -4.0);
}

TEST(ClassicalEnergy, RejectsLengthMismatch) {
  const auto chain = build_chain(PotentialSpec{}, 5, 1.0);
  EXPECT_THROW(classical_energy(chain, SpinConfig{-1, 1}), std::invalid_argument);
}

TEST(ClassicalEnergy, ExactDifferenceFieldsReproducePotentialOnSingleKinks) {
  for (double h0 : {0.2, 1.0, 3.0}) {
    const auto spec = paper_spec(h0);
    const auto chain = build_chain(spec, 41, 0.7, 1.0, 2.0, FieldMode::ExactDifference);
    const double base = classical_energy(chain, single_kink_config(41, 1));
    for (int j = 1; j <= 40; ++j) {
      const double e = classical_energy(chain, single_kink_config(41, j)) - base;
      const double v = 0.7 * (eval_potential(spec, chain.grid().x(j)) - eval_potential(spec, chain.grid().x(1)));
      EXPECT_NEAR(e, v, 1e-12) << "h0=" << h0 << " j=" << j;
    }
  }
}

TEST(ClassicalEnergy, GradientFieldsTrackPotentialToFirstOrder) {
  const auto spec = paper_spec(0.2);
  const auto chain = build_chain(spec, 211, 1.0);
  const double base = classical_energy(chain, single_kink_config(211, 106));
  for (int j : {60, 100, 106, 112, 150}) {
    const double e = classical_energy(chain, single_kink_config(211, j)) - base;
    EXPECT_NEAR(e, eval_potential(spec, chain.grid().x(j)), 0.05) << j;
  }
}

TEST(Encoding, EncodeDecodeRoundTripOnGrid) {
  const auto chain = build_chain(PotentialSpec{}, 211, 1.0);
  for (int j = 1; j <= 210; ++j) {
    const double x = chain.grid().x(j);
    const auto c = encode(chain, x);
    ASSERT_EQ(domain_wall_bond(c), j);
    ASSERT_EQ(decode(chain, c), x);
    ASSERT_EQ(kink_count(c), 1);
  }
  EXPECT_THROW(encode(chain, 3.5), std::invalid_argument);
}

TEST(Encoding, DecodeRejectsConstraintViolations) {
  const auto chain = build_chain(PotentialSpec{}, 5, 1.0);
  EXPECT_FALSE(decode(chain, SpinConfig{1, 1, -1, -1, -1}));  // reversed wall
  EXPECT_FALSE(decode(chain, SpinConfig{-1, 1, -1, 1, 1}));   // three kinks
  EXPECT_FALSE(decode(chain, SpinConfig{-1, -1, -1, -1, -1}));
  EXPECT_TRUE(decode(chain, SpinConfig{-1, -1, -1, -1, 1}));
}

TEST(Encoding, ChainJsonRoundTrip) {
  const auto chain = build_chain(paper_spec(0.2), 33, 0.8, 1.0, 2.5, FieldMode::ExactDifference);
  const auto back = chain_from_json(chain_to_json(chain));
  ASSERT_EQ(back.n_spins(), 33);
  EXPECT_EQ(back.field_mode(), FieldMode::ExactDifference);
  for (int i = 0; i < 33; ++i) EXPECT_DOUBLE_EQ(back.local_field(i), chain.local_field(i));
  EXPECT_THROW(chain_from_json(R"({"n": 3})"), std::invalid_argument);
}

TEST(Encoding, BuildChainRejectsWeakBoundary) {
  EXPECT_THROW(build_chain(PotentialSpec{}, 11, 1.0, 1.0, 0.5), std::invalid_argument);
  EXPECT_THROW(build_chain(PotentialSpec{}, 11, -1.0), std::invalid_argument);
}
