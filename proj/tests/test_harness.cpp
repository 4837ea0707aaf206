#include "propgate/harness.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "propgate/generators.hpp"

namespace propgate {
namespace {

TEST(BoundsEqual, ToleranceFormula) {
  EXPECT_TRUE(bounds_equal(1.0, 1.0 + 5e-6));  // within 1e-8 + 1e-5 * |b|
  EXPECT_FALSE(bounds_equal(0.0, 2e-8));       // exceeds t_abs, |b| negligible
  EXPECT_TRUE(bounds_equal(0.0, 9e-9));
}

TEST(BoundsEqual, InfinityCases) {
  EXPECT_TRUE(bounds_equal(kInf, kInf));
  EXPECT_TRUE(bounds_equal(-kInf, -kInf));
  EXPECT_FALSE(bounds_equal(kInf, -kInf));
  EXPECT_FALSE(bounds_equal(kInf, 1e19));
  EXPECT_FALSE(bounds_equal(1e19, kInf));
}

TEST(BoundsEqual, ReflexiveAndMonotoneInTolerances) {
  std::mt19937_64 rng(81);
  std::uniform_real_distribution<double> dist(-1e6, 1e6);
  for (int trial = 0; trial < 2000; ++trial) {
    const double a = dist(rng);
    EXPECT_TRUE(bounds_equal(a, a));
    const double b = dist(rng);
    if (bounds_equal(a, b, 1e-8, 1e-5)) {
      EXPECT_TRUE(bounds_equal(a, b, 1e-7, 1e-5));
      EXPECT_TRUE(bounds_equal(a, b, 1e-8, 1e-4));
    }
  }
}

PropagationResult result_with_bounds(std::vector<double> lower,
                                     std::vector<double> upper,
                                     PropagationStatus status) {
  PropagationResult r;
  r.bounds.lower = std::move(lower);
  r.bounds.upper = std::move(upper);
  r.status = status;
  return r;
}

TEST(CompareResults, IdenticalResultsAreEqual) {
  const auto a = result_with_bounds({0.0, 1.0}, {2.0, 3.0},
                                    PropagationStatus::Converged);
  const auto report = compare_results(a, a);
  EXPECT_TRUE(report.equal);
  EXPECT_EQ(report.num_mismatches, 0);
  EXPECT_FALSE(report.first_mismatch.has_value());
}

TEST(CompareResults, SingleUpperMismatch) {
  const auto a = result_with_bounds({0.0, 1.0}, {2.0, 3.0},
                                    PropagationStatus::Converged);
  const auto b = result_with_bounds({0.0, 1.0}, {2.0, 4.0},
                                    PropagationStatus::Converged);
  const auto report = compare_results(a, b);
  EXPECT_FALSE(report.equal);
  EXPECT_EQ(report.num_mismatches, 1);
  ASSERT_TRUE(report.first_mismatch.has_value());
  EXPECT_EQ(report.first_mismatch->var, 1);
  EXPECT_EQ(report.first_mismatch->side, BoundSide::Upper);
  EXPECT_DOUBLE_EQ(report.first_mismatch->reference, 3.0);
  EXPECT_DOUBLE_EQ(report.first_mismatch->tested, 4.0);
}

TEST(CompareResults, StatusMismatchIsNotEqual) {
  const auto a = result_with_bounds({0.0}, {1.0}, PropagationStatus::Converged);
  const auto b = result_with_bounds({0.0}, {1.0}, PropagationStatus::RoundLimit);
  const auto report = compare_results(a, b);
  EXPECT_FALSE(report.equal);
  EXPECT_FALSE(report.status_match);
  EXPECT_EQ(report.num_mismatches, 1);
}

TEST(CompareResults, DimensionMismatchThrows) {
  const auto a = result_with_bounds({0.0}, {1.0}, PropagationStatus::Converged);
  const auto b =
      result_with_bounds({0.0, 0.0}, {1.0, 1.0}, PropagationStatus::Converged);
  EXPECT_THROW(compare_results(a, b), std::invalid_argument);
}

TEST(GeometricMean, HandValues) {
  const std::vector<double> values{2.0, 8.0};
  EXPECT_NEAR(geometric_mean(values), 4.0, 1e-12);
  const std::vector<double> one{1.0};
  EXPECT_DOUBLE_EQ(geometric_mean(one), 1.0);
}

TEST(GeometricMean, ReorderingInvariantAndMatchesProductRoute) {
  std::mt19937_64 rng(83);
  std::uniform_real_distribution<double> dist(0.01, 100.0);
  std::vector<double> values(20);
  for (auto& v : values) v = dist(rng);

  const double mean = geometric_mean(values);
  std::shuffle(values.begin(), values.end(), rng);
  EXPECT_NEAR(geometric_mean(values), mean, 1e-12 * mean);

  double product = 1.0;
  for (double v : values) product *= v;
  const double product_route =
      std::pow(product, 1.0 / static_cast<double>(values.size()));
  EXPECT_NEAR(mean, product_route, 1e-12 * mean);
}

TEST(Percentile, LinearInterpolation) {
  const std::vector<double> values{1.0, 2.0, 3.0, 4.0};
  EXPECT_DOUBLE_EQ(percentile(values, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(percentile(values, 100.0), 4.0);
  EXPECT_DOUBLE_EQ(percentile(values, 50.0), 2.5);
}

TEST(SizeClass, PublishedBands) {
  EXPECT_EQ(size_class_of(15000, 500), SizeClass::Set2);
  EXPECT_EQ(size_class_of(999, 999), SizeClass::Small);
  EXPECT_EQ(size_class_of(1000, 10), SizeClass::Set1);
  EXPECT_EQ(size_class_of(10, 9999), SizeClass::Set1);
  EXPECT_EQ(size_class_of(640000, 1), SizeClass::Set8);
  EXPECT_EQ(size_class_of(100000, 200000), SizeClass::Set6);
}

TEST(RunBenchmark, TableShapeAndSpeedups) {
  std::vector<BenchInput> inputs;
  inputs.push_back({"cascade12", gen_cascade(12)});
  RandomInstanceOptions options;
  options.num_rows = 60;
  options.num_cols = 60;
  options.seed = 4;
  inputs.push_back({"random60", gen_random(options)});

  const std::vector<EngineId> engines{EngineId::Seq, EngineId::Par};
  const BenchTable table =
      run_benchmark(inputs, engines, EngineConfig{}, BenchOptions{});

  ASSERT_EQ(table.records.size(), 4u);
  EXPECT_EQ(table.speedups.size(), 4u);
  ASSERT_EQ(table.aggregates.size(), 1u);
  EXPECT_EQ(table.aggregates[0].engine, EngineId::Par);
  EXPECT_EQ(table.aggregates[0].included, 2);
  for (const SpeedupEntry& s : table.speedups) {
    EXPECT_GT(s.speedup, 0.0);
    // the baseline engine measured against itself is exactly 1
    if (s.engine == EngineId::Seq) EXPECT_DOUBLE_EQ(s.speedup, 1.0);
  }

  const std::string csv = bench_to_csv(table);
  EXPECT_NE(csv.find("instance,engine,status"), std::string::npos);
  EXPECT_NE(csv.find("cascade12"), std::string::npos);
  const std::string json_text = bench_to_json(table);
  EXPECT_NE(json_text.find("\"records\""), std::string::npos);
}

TEST(RunBenchmark, RoundLimitInstancesAreExcluded) {
  std::vector<BenchInput> inputs;
  inputs.push_back({"cascade200", gen_cascade(200)});  // par hits the limit
  inputs.push_back({"cascade5", gen_cascade(5)});

  const std::vector<EngineId> engines{EngineId::Seq, EngineId::Par};
  const BenchTable table =
      run_benchmark(inputs, engines, EngineConfig{}, BenchOptions{});

  ASSERT_EQ(table.excluded.size(), 1u);
  EXPECT_EQ(table.excluded[0], "cascade200");
  ASSERT_EQ(table.aggregates.size(), 1u);
  EXPECT_EQ(table.aggregates[0].included, 1);
  ASSERT_EQ(table.speedups.size(), 2u);  // seq self-speedup + par, cascade5 only
  for (const SpeedupEntry& s : table.speedups)
    EXPECT_EQ(s.instance, "cascade5");
}

TEST(RunBenchmark, ValidatesArguments) {
  std::vector<BenchInput> inputs;
  inputs.push_back({"cascade5", gen_cascade(5)});
  const std::vector<EngineId> only_par{EngineId::Par};
  EXPECT_THROW(
      run_benchmark(inputs, only_par, EngineConfig{}, BenchOptions{}),
      std::invalid_argument);  // baseline seq not in the engine list

  BenchOptions bad;
  bad.repetitions = 0;
  const std::vector<EngineId> engines{EngineId::Seq};
  EXPECT_THROW(run_benchmark(inputs, engines, EngineConfig{}, bad),
               std::invalid_argument);
}

}  // namespace
}  // namespace propgate
