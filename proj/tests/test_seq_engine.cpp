#include "propgate/seq_engine.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <random>
#include <tuple>

#include "propgate/generators.hpp"
#include "propgate/harness.hpp"
#include "test_util.hpp"

namespace propgate {
namespace {

using Triplet = std::tuple<int, int, double>;

ProblemInstance make_instance(std::vector<Triplet> entries, int m, int n,
                              std::vector<double> lhs, std::vector<double> rhs,
                              std::vector<double> lower,
                              std::vector<double> upper,
                              std::vector<std::uint8_t> integral = {}) {
  ProblemInstance inst;
  inst.name = "inline";
  inst.matrix = csr_from_triplets(entries, m, n);
  inst.lhs = std::move(lhs);
  inst.rhs = std::move(rhs);
  inst.bounds.lower = std::move(lower);
  inst.bounds.upper = std::move(upper);
  inst.integral = integral.empty()
                      ? std::vector<std::uint8_t>(static_cast<size_t>(n), 0)
                      : std::move(integral);
  return inst;
}

TEST(SeqEngine, CascadeResolvesInTwoRounds) {
  const auto result = propagate_sequential(gen_cascade(3), EngineConfig{});
  EXPECT_EQ(result.status, PropagationStatus::Converged);
  EXPECT_EQ(result.rounds_executed, 2);
  for (int j = 1; j <= 3; ++j)
    EXPECT_DOUBLE_EQ(result.bounds.upper[j], 0.0) << "x" << j;
  EXPECT_EQ(result.per_round_changes.back(), 0);
}

TEST(SeqEngine, IntegerFixingExample) {
  // x + y <= 1 with x, y binary-like integrals, plus x >= 1.
  const auto inst = make_instance(
      {{0, 0, 1.0}, {0, 1, 1.0}, {1, 0, 1.0}}, 2, 2, {-kInf, 1.0},
      {1.0, kInf}, {0.0, 0.0}, {1.0, 1.0}, {1, 1});
  const auto result = propagate_sequential(inst, EngineConfig{});
  EXPECT_EQ(result.status, PropagationStatus::Converged);
  EXPECT_DOUBLE_EQ(result.bounds.lower[0], 1.0);
  EXPECT_DOUBLE_EQ(result.bounds.upper[0], 1.0);
  EXPECT_DOUBLE_EQ(result.bounds.lower[1], 0.0);
  EXPECT_DOUBLE_EQ(result.bounds.upper[1], 0.0);
}

TEST(SeqEngine, DetectsInfeasibleToyInstance) {
  // [5, inf) over x in [0, 1]: the implied lower bound 5 crosses upper 1.
  const auto inst = make_instance({{0, 0, 1.0}}, 1, 1, {5.0}, {kInf}, {0.0},
                                  {1.0});
  const auto result = propagate_sequential(inst, EngineConfig{});
  EXPECT_EQ(result.status, PropagationStatus::Infeasible);
}

TEST(SeqEngine, CrossedInputBoundsAreInfeasible) {
  const auto inst =
      make_instance({{0, 0, 1.0}}, 1, 1, {-kInf}, {10.0}, {2.0}, {1.0});
  const auto result = propagate_sequential(inst, EngineConfig{});
  EXPECT_EQ(result.status, PropagationStatus::Infeasible);
  EXPECT_EQ(result.rounds_executed, 0);
}

TEST(SeqEngine, RoundLimitIsReported) {
  EngineConfig cfg;
  cfg.round_limit = 1;
  const auto result = propagate_sequential(gen_cascade(4), cfg);
  EXPECT_EQ(result.status, PropagationStatus::RoundLimit);
  EXPECT_EQ(result.rounds_executed, 1);
}

TEST(SeqEngine, FixedPointIsStable) {
  std::mt19937_64 rng(51);
  const EngineConfig cfg;
  for (int trial = 0; trial < 25; ++trial) {
    RandomInstanceOptions options;
    options.num_rows = 20 + static_cast<int>(rng() % 80);
    options.num_cols = 20 + static_cast<int>(rng() % 80);
    options.seed = rng();
    const ProblemInstance inst = gen_random(options);

    const auto first = propagate_sequential(inst, cfg);
    if (first.status != PropagationStatus::Converged) continue;

    ProblemInstance again = inst;
    again.bounds = first.bounds;
    const auto second = propagate_sequential(again, cfg);
    EXPECT_EQ(second.status, PropagationStatus::Converged);
    EXPECT_EQ(second.rounds_executed, 1);
    EXPECT_EQ(second.total_bound_changes, 0);
  }
}

TEST(SeqEngine, NeverLoosensBounds) {
  std::mt19937_64 rng(53);
  const EngineConfig cfg;
  for (int trial = 0; trial < 25; ++trial) {
    RandomInstanceOptions options;
    options.num_rows = 10 + static_cast<int>(rng() % 60);
    options.num_cols = 10 + static_cast<int>(rng() % 60);
    options.seed = rng();
    const ProblemInstance inst = gen_random(options);

    const auto result = propagate_sequential(inst, cfg);
    for (int j = 0; j < inst.num_cols(); ++j) {
      EXPECT_GE(result.bounds.lower[j], inst.bounds.lower[j]);
      EXPECT_LE(result.bounds.upper[j], inst.bounds.upper[j]);
    }
  }
}

TEST(SeqEngine, MarkingMatchesRescanOracle) {
  std::mt19937_64 rng(59);
  const EngineConfig cfg;
  for (int trial = 0; trial < 25; ++trial) {
    RandomInstanceOptions options;
    options.num_rows = 10 + static_cast<int>(rng() % 80);
    options.num_cols = 10 + static_cast<int>(rng() % 80);
    options.seed = rng();
    const ProblemInstance inst = gen_random(options);

    const auto marked = propagate_sequential(inst, cfg);
    const auto oracle = test::propagate_rescan_all(inst, cfg);

    const long long sum =
        std::accumulate(marked.per_round_changes.begin(),
                        marked.per_round_changes.end(), static_cast<long long>(0));
    EXPECT_EQ(marked.total_bound_changes, sum);
    EXPECT_EQ(marked.status, oracle.status);
    EXPECT_EQ(marked.rounds_executed, oracle.rounds);
    EXPECT_EQ(marked.per_round_changes, oracle.per_round_changes);
    EXPECT_EQ(marked.bounds.lower, oracle.bounds.lower);
    EXPECT_EQ(marked.bounds.upper, oracle.bounds.upper);
    EXPECT_LE(marked.constraints_processed, oracle.constraints_processed);
  }
}

TEST(SeqEngine, CascadeRoundsIndependentOfLength) {
  for (int m : {2, 10, 50, 150}) {
    const auto result = propagate_sequential(gen_cascade(m), EngineConfig{});
    EXPECT_EQ(result.status, PropagationStatus::Converged) << "m=" << m;
    EXPECT_EQ(result.rounds_executed, 2) << "m=" << m;
  }
}

TEST(SeqEngine, Float32ModeConverges) {
  EngineConfig cfg;
  cfg.scalar_mode = ScalarMode::Narrow32;
  const auto f32 = propagate_sequential(gen_cascade(6), cfg);
  EXPECT_EQ(f32.status, PropagationStatus::Converged);
  const auto f64 = propagate_sequential(gen_cascade(6), EngineConfig{});
  for (int j = 0; j < 7; ++j) {
    EXPECT_TRUE(bounds_equal(f64.bounds.upper[j], f32.bounds.upper[j], 1e-4,
                             1e-4));
  }
}

}  // namespace
}  // namespace propgate
