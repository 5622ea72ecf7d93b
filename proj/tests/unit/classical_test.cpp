#include <gtest/gtest.h>

#include <random>

#include "bell/classical.hpp"
#include "bell/generators.hpp"
#include "oracles.hpp"

using namespace bell;

TEST(ClassicalTest, ChshValues) {
  const ClassicalOptimum opt = classical_optimum(chsh());
  EXPECT_EQ(opt.value, 2.0);
  EXPECT_EQ(opt.max_value, 2.0);
  EXPECT_EQ(opt.min_value, -2.0);
  // First maximizer in lexicographic order: both parties output 0 always.
  EXPECT_EQ(opt.argmax.alice, (std::vector<int>{0, 0}));
  EXPECT_EQ(opt.argmax.bob, (std::vector<int>{0, 0}));
  EXPECT_DOUBLE_EQ(pair(chsh(), vertex_behavior(chsh().scenario(), opt.argmin)), -2.0);
}

TEST(ClassicalTest, ChshBanachNormFollowsExtremePointFormula) {
  // Signed strategies give |c00 + c01| + |c10 - c11| = 2 for CHSH.
  EXPECT_DOUBLE_EQ(banach_norm(chsh()), 2.0);
  EXPECT_DOUBLE_EQ(oracle::banach_norm_brute(chsh()), 2.0);
  EXPECT_DOUBLE_EQ(classical_value_incomplete(chsh()), 2.0);
}

TEST(ClassicalTest, MagicSquareIsEightNinths) {
  const BellFunctional t = magic_square();
  EXPECT_EQ(classical_value(t), 8.0 / 9.0);
  EXPECT_EQ(classical_value(t.scaled(9.0)), 8.0);
}

TEST(ClassicalTest, MagicSquareEncoding) {
  for (int a = 0; a < 4; ++a) {
    const auto row = magic_square_row(a);
    EXPECT_EQ((row[0] + row[1] + row[2]) % 2, 0);
    EXPECT_EQ(row[0] * 2 + row[1], a);
    const auto col = magic_square_column(a);
    EXPECT_EQ((col[0] + col[1] + col[2]) % 2, 1);
    EXPECT_EQ(col[0] * 2 + col[1], a);
  }
}

TEST(ClassicalTest, MatchesBruteForceOnRandomFunctionals) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 60; ++trial) {
    const Scenario s(1 + trial % 3, 1 + (trial / 3) % 3, 2 + trial % 2, 2 + (trial / 2) % 2);
    const BellFunctional t = random_functional(s, 1000 + trial);
    const ClassicalOptimum opt = classical_optimum(t);
    EXPECT_NEAR(opt.value, oracle::classical_value_brute(t), 1e-12);
    EXPECT_NEAR(opt.max_value, oracle::max_vertex_value_brute(t), 1e-12);
    EXPECT_NEAR(pair(t, vertex_behavior(s, opt.argmax)), opt.max_value, 1e-12);
    EXPECT_NEAR(pair(t, vertex_behavior(s, opt.argmin)), opt.min_value, 1e-12);
  }
}

TEST(ClassicalTest, AsymmetricScenarioEnumeratesSmallerParty) {
  // Bob has far fewer strategies; the result must not depend on which side is enumerated.
  const Scenario s(4, 1, 3, 5);
  const BellFunctional t = random_functional(s, 42);
  const ClassicalOptimum opt = classical_optimum(t);
  EXPECT_NEAR(opt.value, oracle::classical_value_brute(t), 1e-12);
  EXPECT_NEAR(pair(t, vertex_behavior(s, opt.argmax)), opt.max_value, 1e-12);
}

TEST(ClassicalTest, BanachSandwichOnRandomFunctionals) {
  for (int trial = 0; trial < 40; ++trial) {
    const Scenario s(1 + trial % 3, 1 + (trial / 3) % 3, 1 + trial % 3, 1 + (trial / 2) % 3);
    const BellFunctional t = random_functional(s, 500 + trial);
    const double cin = classical_value_incomplete(t);
    const double norm = banach_norm(t);
    EXPECT_NEAR(norm, oracle::banach_norm_brute(t), 1e-12);
    EXPECT_LE(cin, norm + 1e-12);
    EXPECT_LE(norm, 4 * cin + 1e-12);
  }
}

TEST(ClassicalTest, ZeroFunctional) {
  const BellFunctional z(Scenario(2, 2, 2, 2));
  EXPECT_EQ(classical_value(z), 0.0);
  EXPECT_EQ(banach_norm(z), 0.0);
}

TEST(ClassicalTest, GuardExceeded) {
  Limits tight;
  tight.enumeration = 3;
  EXPECT_THROW(classical_value(chsh(), tight), GuardExceeded);
}

TEST(ClassicalTest, MembershipLocalMixture) {
  std::mt19937_64 rng(17);
  const Scenario s(2, 3, 2, 2);
  const Behavior p = behavior_from_local(oracle::random_local_model(s, 6, rng), s);
  const MembershipCertificate c = is_local(p);
  ASSERT_EQ(c.verdict, Verdict::local);
  EXPECT_LE(c.reconstruction_error, 1e-8);
  EXPECT_TRUE(validate(c.model, s).empty());
  const Behavior back = behavior_from_local(c.model, s);
  for (std::size_t i = 0; i < p.probs().size(); ++i) EXPECT_NEAR(back.probs()[i], p.probs()[i], 1e-8);
}

TEST(ClassicalTest, MembershipNonlocalSeparatorIsSound) {
  const Behavior q = behavior_from_quantum(oracle::chsh_optimal_model());
  EXPECT_FALSE(oracle::fine_local(q));
  const MembershipCertificate c = is_local(q);
  ASSERT_EQ(c.verdict, Verdict::nonlocal);
  EXPECT_NEAR(oracle::max_vertex_value_brute(c.separator), c.max_vertex_value, 1e-9);
  EXPECT_NEAR(oracle::pair_brute(c.separator, q), c.separator_value, 1e-9);
  EXPECT_GE(c.separator_value - oracle::max_vertex_value_brute(c.separator), 1e-9);
}

TEST(ClassicalTest, MembershipAgreesWithFineCriterion) {
  const Behavior q = behavior_from_quantum(oracle::chsh_optimal_model());
  const Behavior noise = uniform_behavior(q.scenario());
  for (int k = 0; k <= 20; ++k) {
    const double v = 0.5 + 0.025 * k;
    const Behavior p = q.mixed_with(noise, v);
    const bool local = oracle::fine_local(p, 1e-12);
    const MembershipCertificate c = is_local(p);
    if (std::abs(v - 1.0 / std::sqrt(2.0)) < 1e-6) continue;
    EXPECT_EQ(c.verdict, local ? Verdict::local : Verdict::nonlocal) << v;
  }
}

TEST(ClassicalTest, MembershipRejectsIncomplete) {
  const Behavior p(Scenario(1, 1, 2, 2), {0.1, 0.1, 0.1, 0.1}, Completeness::incomplete);
  EXPECT_THROW(is_local(p), std::invalid_argument);
}
