#include "propgate/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "propgate/par_engine.hpp"
#include "propgate/seq_engine.hpp"

namespace propgate {

bool bounds_equal(double a, double b, double t_abs, double t_rel) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::fabs(a - b) <= t_abs + t_rel * std::fabs(b);
}

ComparisonReport compare_results(const PropagationResult& reference,
                                 const PropagationResult& test, double t_abs,
                                 double t_rel) {
  if (reference.bounds.size() != test.bounds.size())
    throw std::invalid_argument("compare_results: variable count mismatch");

  ComparisonReport report;
  report.status_match = reference.status == test.status;
  if (!report.status_match) ++report.num_mismatches;

  const int n = reference.bounds.size();
  for (int j = 0; j < n; ++j) {
    if (!bounds_equal(reference.bounds.lower[j], test.bounds.lower[j], t_abs,
                      t_rel)) {
      if (!report.first_mismatch)
        report.first_mismatch = BoundMismatch{j, BoundSide::Lower,
                                              reference.bounds.lower[j],
                                              test.bounds.lower[j]};
      ++report.num_mismatches;
    }
    if (!bounds_equal(reference.bounds.upper[j], test.bounds.upper[j], t_abs,
                      t_rel)) {
      if (!report.first_mismatch)
        report.first_mismatch = BoundMismatch{j, BoundSide::Upper,
                                              reference.bounds.upper[j],
                                              test.bounds.upper[j]};
      ++report.num_mismatches;
    }
  }
  report.equal = report.num_mismatches == 0;
  return report;
}

const char* to_string(SizeClass size_class) {
  switch (size_class) {
    case SizeClass::Small:
      return "Small";
    case SizeClass::Set1:
      return "Set-1";
    case SizeClass::Set2:
      return "Set-2";
    case SizeClass::Set3:
      return "Set-3";
    case SizeClass::Set4:
      return "Set-4";
    case SizeClass::Set5:
      return "Set-5";
    case SizeClass::Set6:
      return "Set-6";
    case SizeClass::Set7:
      return "Set-7";
    case SizeClass::Set8:
      return "Set-8";
  }
  return "Unknown";
}

SizeClass size_class_of(int num_rows, int num_cols) {
  const int d = std::max(num_rows, num_cols);
  if (d < 1000) return SizeClass::Small;
  if (d < 10000) return SizeClass::Set1;
  if (d < 20000) return SizeClass::Set2;
  if (d < 40000) return SizeClass::Set3;
  if (d < 80000) return SizeClass::Set4;
  if (d < 160000) return SizeClass::Set5;
  if (d < 320000) return SizeClass::Set6;
  if (d < 640000) return SizeClass::Set7;
  return SizeClass::Set8;
}

double geometric_mean(std::span<const double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  double log_sum = 0.0;
  for (double v : values) log_sum += std::log(v);
  return std::exp(log_sum / static_cast<double>(values.size()));
}

double percentile(std::span<const double> values, double p) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double rank = p / 100.0 * static_cast<double>(sorted.size() - 1);
  const size_t lo = static_cast<size_t>(std::floor(rank));
  const size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

const char* to_string(EngineId engine) {
  return engine == EngineId::Seq ? "seq" : "par";
}

namespace {

PropagationResult run_engine(EngineId engine, const ProblemInstance& instance,
                             const EngineConfig& cfg) {
  return engine == EngineId::Seq ? propagate_sequential(instance, cfg)
                                 : propagate_parallel(instance, cfg);
}

}  // namespace

BenchTable run_benchmark(std::span<const BenchInput> instances,
                         std::span<const EngineId> engines,
                         const EngineConfig& cfg, const BenchOptions& options) {
  if (options.repetitions < 1)
    throw std::invalid_argument("run_benchmark: repetitions must be >= 1");
  if (std::find(engines.begin(), engines.end(), options.baseline) ==
      engines.end())
    throw std::invalid_argument("run_benchmark: baseline engine not in list");

  BenchTable table;
  table.baseline = options.baseline;
  table.repetitions = options.repetitions;

  // records laid out instance-major, engine-minor
  for (const BenchInput& input : instances) {
    for (EngineId engine : engines) {
      PropagationResult best = run_engine(engine, input.instance, cfg);
      for (int rep = 1; rep < options.repetitions; ++rep) {
        PropagationResult r = run_engine(engine, input.instance, cfg);
        if (r.elapsed < best.elapsed) best = std::move(r);
      }
      BenchRecord rec;
      rec.instance = input.name;
      rec.engine = engine;
      rec.status = best.status;
      rec.rounds = best.rounds_executed;
      rec.total_bound_changes = best.total_bound_changes;
      rec.elapsed_ns = best.elapsed.count();
      rec.nnz = input.instance.matrix.nnz();
      rec.num_rows = input.instance.num_rows();
      rec.num_cols = input.instance.num_cols();
      rec.size_class = size_class_of(rec.num_rows, rec.num_cols);
      table.records.push_back(std::move(rec));
    }
  }

  const size_t num_engines = engines.size();
  std::vector<size_t> baseline_offset;
  for (size_t e = 0; e < num_engines; ++e)
    if (engines[e] == options.baseline) baseline_offset.push_back(e);

  // An instance enters the speedup statistics only when every engine
  // converged on it.
  std::vector<char> included(instances.size(), 1);
  for (size_t i = 0; i < instances.size(); ++i) {
    for (size_t e = 0; e < num_engines; ++e) {
      if (table.records[i * num_engines + e].status !=
          PropagationStatus::Converged)
        included[i] = 0;
    }
    if (!included[i]) table.excluded.push_back(instances[i].name);
  }

  for (size_t e = 0; e < num_engines; ++e) {
    const bool is_baseline = engines[e] == options.baseline;
    EngineAggregate agg;
    agg.engine = engines[e];

    std::vector<double> speedups;
    std::map<SizeClass, std::vector<double>> by_class;
    for (size_t i = 0; i < instances.size(); ++i) {
      if (!included[i]) continue;
      const BenchRecord& base =
          table.records[i * num_engines + baseline_offset.front()];
      const BenchRecord& rec = table.records[i * num_engines + e];
      const double speedup =
          static_cast<double>(std::max<long long>(base.elapsed_ns, 1)) /
          static_cast<double>(std::max<long long>(rec.elapsed_ns, 1));
      table.speedups.push_back(
          SpeedupEntry{rec.instance, rec.engine, speedup, rec.size_class});
      speedups.push_back(speedup);
      by_class[rec.size_class].push_back(speedup);
    }
    if (is_baseline) continue;  // self-speedups are recorded but not aggregated

    agg.included = static_cast<int>(speedups.size());
    if (!speedups.empty()) {
      agg.geo_mean = geometric_mean(speedups);
      agg.p5 = percentile(speedups, 5.0);
      agg.p50 = percentile(speedups, 50.0);
      agg.p95 = percentile(speedups, 95.0);
    }
    for (const auto& [size_class, values] : by_class) {
      agg.per_class.push_back(SizeClassMean{
          size_class, static_cast<int>(values.size()), geometric_mean(values)});
    }
    table.aggregates.push_back(std::move(agg));
  }
  return table;
}

namespace {

std::string double_repr(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string bench_to_csv(const BenchTable& table) {
  std::ostringstream out;
  out << "instance,engine,status,rounds,total_bound_changes,elapsed_ns,nnz,"
         "num_rows,num_cols,size_class\n";
  for (const BenchRecord& r : table.records) {
    out << r.instance << ',' << to_string(r.engine) << ','
        << to_string(r.status) << ',' << r.rounds << ','
        << r.total_bound_changes << ',' << r.elapsed_ns << ',' << r.nnz << ','
        << r.num_rows << ',' << r.num_cols << ',' << to_string(r.size_class)
        << '\n';
  }

  out << "\ninstance,engine,speedup,size_class\n";
  for (const SpeedupEntry& s : table.speedups) {
    out << s.instance << ',' << to_string(s.engine) << ','
        << double_repr(s.speedup) << ',' << to_string(s.size_class) << '\n';
  }

  out << "\nengine,scope,count,geo_mean_speedup,p5,p50,p95\n";
  for (const EngineAggregate& a : table.aggregates) {
    out << to_string(a.engine) << ",all," << a.included << ','
        << double_repr(a.geo_mean) << ',' << double_repr(a.p5) << ','
        << double_repr(a.p50) << ',' << double_repr(a.p95) << '\n';
    for (const SizeClassMean& c : a.per_class) {
      out << to_string(a.engine) << ',' << to_string(c.size_class) << ','
          << c.count << ',' << double_repr(c.geo_mean) << ",,,\n";
    }
  }
  if (!table.excluded.empty()) {
    out << "\nexcluded_instance\n";
    for (const std::string& name : table.excluded) out << name << '\n';
  }
  return out.str();
}

std::string bench_to_json(const BenchTable& table) {
  nlohmann::json j;
  j["baseline"] = to_string(table.baseline);
  j["repetitions"] = table.repetitions;

  j["records"] = nlohmann::json::array();
  for (const BenchRecord& r : table.records) {
    j["records"].push_back({{"instance", r.instance},
                            {"engine", to_string(r.engine)},
                            {"status", to_string(r.status)},
                            {"rounds", r.rounds},
                            {"total_bound_changes", r.total_bound_changes},
                            {"elapsed_ns", r.elapsed_ns},
                            {"nnz", r.nnz},
                            {"num_rows", r.num_rows},
                            {"num_cols", r.num_cols},
                            {"size_class", to_string(r.size_class)}});
  }

  j["speedups"] = nlohmann::json::array();
  for (const SpeedupEntry& s : table.speedups) {
    j["speedups"].push_back({{"instance", s.instance},
                             {"engine", to_string(s.engine)},
                             {"speedup", s.speedup},
                             {"size_class", to_string(s.size_class)}});
  }

  j["aggregates"] = nlohmann::json::array();
  for (const EngineAggregate& a : table.aggregates) {
    nlohmann::json per_class = nlohmann::json::array();
    for (const SizeClassMean& c : a.per_class) {
      per_class.push_back({{"size_class", to_string(c.size_class)},
                           {"count", c.count},
                           {"geo_mean_speedup", c.geo_mean}});
    }
    j["aggregates"].push_back({{"engine", to_string(a.engine)},
                               {"included", a.included},
                               {"geo_mean_speedup", a.geo_mean},
                               {"p5", a.p5},
                               {"p50", a.p50},
                               {"p95", a.p95},
                               {"per_class", std::move(per_class)}});
  }
  j["excluded"] = table.excluded;
  return j.dump(2);
}

}  // namespace propgate
