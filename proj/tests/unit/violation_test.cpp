#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bell/classical.hpp"
#include "bell/generators.hpp"
#include "bell/violation.hpp"
#include "oracles.hpp"

using namespace bell;

namespace {

Behavior chsh_optimal() { return behavior_from_quantum(oracle::chsh_optimal_model()); }

}  // namespace

TEST(ViolationTest, ChshOptimalBehavior) {
  const Behavior q = chsh_optimal();
  const MaxViolation mv = max_violation(q);
  EXPECT_NEAR(mv.nu, std::numbers::sqrt2, 1e-7);
  EXPECT_FALSE(mv.boundary);
  // The witness is normalized and attains nu in ratio form.
  EXPECT_NEAR(oracle::classical_value_brute(mv.witness), 1.0, 1e-9);
  EXPECT_NEAR(std::abs(oracle::pair_brute(mv.witness, q)) / oracle::classical_value_brute(mv.witness), mv.nu, 1e-7);
  EXPECT_NEAR(noise_robustness(q), 2.0 / (std::numbers::sqrt2 + 1.0), 1e-7);
  EXPECT_LE(check_noise_identity(q), 1e-6);
  EXPECT_NEAR(comm_lower_bound(q), 0.5, 1e-6);
  EXPECT_NEAR(violation_ratio(chsh(), q), std::numbers::sqrt2, 1e-12);
}

TEST(ViolationTest, LocalBehaviorsSitOnTheBoundary) {
  std::mt19937_64 rng(9);
  const Scenario s(2, 2, 2, 3);
  for (int k = 0; k < 5; ++k) {
    const Behavior p = behavior_from_local(oracle::random_local_model(s, 4, rng), s);
    const ViolationReport r = violation_report(p);
    EXPECT_EQ(r.nu, 1.0);
    EXPECT_TRUE(r.boundary);
    EXPECT_NEAR(r.pi, 1.0, 1e-9);
    EXPECT_EQ(r.comm_bound_bits, 0.0);
  }
}

TEST(ViolationTest, QuasiConvexUnderLocalNoise) {
  std::mt19937_64 rng(12);
  const Behavior q = chsh_optimal();
  const double nu = max_violation(q).nu;
  for (int k = 0; k < 4; ++k) {
    const Behavior noise = behavior_from_local(oracle::random_local_model(q.scenario(), 3, rng), q.scenario());
    for (int i = 0; i <= 10; ++i) {
      const double v = 0.1 * i;
      EXPECT_LE(max_violation(q.mixed_with(noise, v)).nu, nu + 1e-8);
    }
  }
}

TEST(ViolationTest, IdentityOnRandomQuantumBehaviors) {
  std::mt19937_64 rng(41);
  const Scenario s(2, 2, 2, 2);
  for (int k = 0; k < 15; ++k) {
    const Behavior q = behavior_from_quantum(random_quantum_model(s, 2, Completeness::complete, rng));
    EXPECT_LE(check_noise_identity(q), 1e-6) << k;
  }
}

TEST(ViolationTest, SignalingAndIncompleteInputsAreUndefined) {
  const Scenario s(2, 2, 2, 2);
  std::vector<double> probs(16, 0.0);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) probs[s.index(x, y, 0, x)] = 1.0;
  const Behavior signaling(s, probs);
  try {
    max_violation(signaling);
    FAIL() << "expected UndefinedQuantity";
  } catch (const UndefinedQuantity& e) {
    EXPECT_NE(std::string(e.what()).find("nu undefined for signaling behaviors"), std::string::npos);
  }
  EXPECT_THROW(noise_robustness(signaling), UndefinedQuantity);
  const Behavior incomplete(s, std::vector<double>(16, 0.05), Completeness::incomplete);
  EXPECT_THROW(max_violation(incomplete), UndefinedQuantity);
}

TEST(ViolationTest, RatioUndefinedForZeroFunctional) {
  EXPECT_THROW(violation_ratio(BellFunctional(Scenario(2, 2, 2, 2)), chsh_optimal()), UndefinedQuantity);
}

TEST(ViolationTest, CompletionUsesStoredMarginals) {
  QuantumModel m = oracle::chsh_optimal_model();
  m.completeness = Completeness::incomplete;
  for (auto& povm : m.alice_povms) povm[1] *= 0.5;
  for (auto& povm : m.bob_povms) povm[0] *= 0.25;
  const Behavior in = behavior_from_quantum(m);
  const Behavior full = complete_behavior(in);
  const Behavior direct = behavior_from_quantum(complete_model(m));
  ASSERT_TRUE(full.is_complete());
  EXPECT_EQ(full.scenario(), Scenario(2, 2, 3, 3));
  for (std::size_t i = 0; i < full.probs().size(); ++i) EXPECT_NEAR(full.probs()[i], direct.probs()[i], 1e-12);
  EXPECT_TRUE(no_signaling_check(full).ok);
}

TEST(ViolationTest, CompletionWithoutMarginals) {
  const Scenario s(1, 1, 2, 2);
  const Behavior in(s, {0.2, 0.1, 0.0, 0.3}, Completeness::incomplete);
  const Behavior full = complete_behavior(in);
  // Alice's marginal defaults to the row sums, so her abstain row is empty.
  EXPECT_NEAR(full(0, 0, 2, 0) + full(0, 0, 2, 1), 0.0, 1e-15);
  EXPECT_NEAR(full(0, 0, 2, 2), 0.4, 1e-15);
  double total = 0.0;
  for (double p : full.probs()) total += p;
  EXPECT_NEAR(total, 1.0, 1e-15);
}

TEST(ViolationTest, CompletionFailureNamesTheCell) {
  const Scenario s(1, 1, 2, 2);
  Behavior in(s, {0.4, 0.1, 0.1, 0.1}, Completeness::incomplete);
  in.set_marginals({0.2, 0.2}, {0.5, 0.2});
  try {
    complete_behavior(in);
    FAIL() << "expected InvalidObject";
  } catch (const InvalidObject& e) {
    EXPECT_NE(std::string(e.what()).find("x=0, y=0"), std::string::npos);
  }
}

TEST(ViolationTest, Eq4OnChsh) {
  SeesawConfig cfg;
  cfg.dim = 2;
  cfg.seeds = 10;
  const Eq4Result r = eq4_gap(chsh(), cfg);
  EXPECT_NEAR(r.rhs, std::numbers::sqrt2, 1e-6);
  EXPECT_GE(r.lhs_lower, r.rhs - 1e-6);
  EXPECT_EQ(r.classical_value_incomplete, 2.0);
}

TEST(ViolationTest, Eq4ZeroFunctionalIsUndefined) {
  SeesawConfig cfg;
  cfg.seeds = 1;
  EXPECT_THROW(eq4_gap(BellFunctional(Scenario(2, 2, 2, 2)), cfg), UndefinedQuantity);
}

TEST(ViolationTest, DimensionWitnessOnChsh) {
  SeesawConfig cfg;
  cfg.seeds = 10;
  const DimensionWitnessReport r = dimension_witness_report(chsh(), 2 * std::numbers::sqrt2, 2, cfg);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_NEAR(r.rows[0].best_value, 2.0, 1e-9);
  EXPECT_TRUE(r.rows[0].exceeded);
  EXPECT_NEAR(r.rows[1].best_value, 2 * std::numbers::sqrt2, 1e-6);
  EXPECT_FALSE(r.rows[1].exceeded);
  EXPECT_EQ(r.label.rfind("HEURISTIC", 0), 0u);
  EXPECT_EQ(r.algebraic_bound, 4.0);

  const DimensionWitnessReport high = dimension_witness_report(chsh(), 3.0, 2, cfg);
  for (const auto& row : high.rows) EXPECT_TRUE(row.exceeded);
  EXPECT_FALSE(high.warnings.empty());

  const DimensionWitnessReport zero = dimension_witness_report(chsh(), 0.0, 2, cfg);
  for (const auto& row : zero.rows) EXPECT_FALSE(row.exceeded);

  EXPECT_THROW(dimension_witness_report(chsh(), -1.0, 2, cfg), std::invalid_argument);
  EXPECT_THROW(dimension_witness_report(chsh(), 1.0, 0, cfg), std::invalid_argument);
}
