#ifndef PROPGATE_HARNESS_HPP
#define PROPGATE_HARNESS_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "propgate/model.hpp"

namespace propgate {

/// Tolerance comparison |a - b| <= t_abs + t_rel * |b|, where a is the
/// reference value and b the tested one. Infinite values are equal only to
/// infinities of the same sign.
bool bounds_equal(double a, double b, double t_abs = 1e-8,
                  double t_rel = 1e-5);

enum class BoundSide { Lower, Upper };

struct BoundMismatch {
  int var = -1;
  BoundSide side = BoundSide::Lower;
  double reference = 0.0;
  double tested = 0.0;
};

struct ComparisonReport {
  bool equal = false;
  bool status_match = false;
  long long num_mismatches = 0;  // a status mismatch counts as one
  std::optional<BoundMismatch> first_mismatch;
};

/// Per-variable, per-side comparison of two propagation results. Statuses
/// must match for the results to be equal. Throws std::invalid_argument on
/// dimension mismatch.
ComparisonReport compare_results(const PropagationResult& reference,
                                 const PropagationResult& test,
                                 double t_abs = 1e-8, double t_rel = 1e-5);

enum class SizeClass {
  Small,  // below every published band
  Set1,
  Set2,
  Set3,
  Set4,
  Set5,
  Set6,
  Set7,
  Set8
};

const char* to_string(SizeClass size_class);

/// Band [s, t): fewer than t of both dimensions, at least s of one.
SizeClass size_class_of(int num_rows, int num_cols);

/// exp(mean of logs); NaN for an empty input.
double geometric_mean(std::span<const double> values);

/// Linear-interpolation percentile (p in [0, 100]) of an unsorted sample.
double percentile(std::span<const double> values, double p);

enum class EngineId { Seq, Par };

const char* to_string(EngineId engine);

struct BenchInput {
  std::string name;
  ProblemInstance instance;
};

struct BenchOptions {
  int repetitions = 3;
  EngineId baseline = EngineId::Seq;
};

struct BenchRecord {
  std::string instance;
  EngineId engine = EngineId::Seq;
  PropagationStatus status = PropagationStatus::Converged;
  int rounds = 0;
  long long total_bound_changes = 0;
  long long elapsed_ns = 0;  // best of repetitions
  long long nnz = 0;
  int num_rows = 0;
  int num_cols = 0;
  SizeClass size_class = SizeClass::Small;
};

struct SpeedupEntry {
  std::string instance;
  EngineId engine = EngineId::Par;
  double speedup = 1.0;
  SizeClass size_class = SizeClass::Small;
};

struct SizeClassMean {
  SizeClass size_class = SizeClass::Small;
  int count = 0;
  double geo_mean = 0.0;
};

struct EngineAggregate {
  EngineId engine = EngineId::Par;
  int included = 0;
  double geo_mean = 0.0;
  double p5 = 0.0;
  double p50 = 0.0;
  double p95 = 0.0;
  std::vector<SizeClassMean> per_class;
};

struct BenchTable {
  std::vector<BenchRecord> records;
  std::vector<SpeedupEntry> speedups;
  std::vector<EngineAggregate> aggregates;
  std::vector<std::string> excluded;  // instances left out of speedup means
  EngineId baseline = EngineId::Seq;
  int repetitions = 3;
};

/// Runs each engine on each instance (best-of-repetitions timing, engines
/// timed over the round loop only) and aggregates speedups against the
/// baseline engine. Instances where any engine fails to converge are
/// excluded from the means and listed in `excluded`.
BenchTable run_benchmark(std::span<const BenchInput> instances,
                         std::span<const EngineId> engines,
                         const EngineConfig& cfg,
                         const BenchOptions& options = {});

std::string bench_to_csv(const BenchTable& table);
std::string bench_to_json(const BenchTable& table);

}  // namespace propgate

#endif  // PROPGATE_HARNESS_HPP
