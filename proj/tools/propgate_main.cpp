#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "propgate/generators.hpp"
#include "propgate/harness.hpp"
#include "propgate/model.hpp"
#include "propgate/mps.hpp"
#include "propgate/par_engine.hpp"
#include "propgate/seq_engine.hpp"

namespace {

using propgate::EngineConfig;
using propgate::EngineId;
using propgate::ProblemInstance;
using propgate::PropagationResult;
using propgate::PropagationStatus;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitNotEqualOrLimit = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitUsage = 3;

struct CommonOptions {
  std::string engine = "seq";
  int workers = -1;  // -1: not set, fall back to PROPGATE_THREADS
  int rounds_limit = 100;
  std::string precision = "f64";
  int nnz_budget = 1024;
  int vector_threshold = 64;
  std::string format = "human";
  std::string output;

  EngineConfig config() const {
    EngineConfig cfg;
    cfg.round_limit = rounds_limit;
    cfg.nnz_budget = nnz_budget;
    cfg.vector_threshold = vector_threshold;
    cfg.scalar_mode = precision == "f32" ? propgate::ScalarMode::Narrow32
                                         : propgate::ScalarMode::Wide64;
    if (workers >= 0) {
      cfg.worker_count = workers;
    } else if (const char* env = std::getenv("PROPGATE_THREADS")) {
      cfg.worker_count = std::max(0, std::atoi(env));
    }
    cfg.validate();
    return cfg;
  }
};

void add_engine_flags(CLI::App* cmd, CommonOptions* opts) {
  cmd->add_option("--engine", opts->engine, "Propagation engine")
      ->check(CLI::IsMember({"seq", "par"}));
  cmd->add_option("--workers", opts->workers,
                  "Worker threads for the parallel engine (0 = auto)");
  cmd->add_option("--rounds-limit", opts->rounds_limit,
                  "Maximum number of propagation rounds");
  cmd->add_option("--precision", opts->precision, "Scalar mode")
      ->check(CLI::IsMember({"f64", "f32"}));
  cmd->add_option("--nnz-budget", opts->nnz_budget,
                  "Non-zero budget of a Stream row block");
  cmd->add_option("--vector-threshold", opts->vector_threshold,
                  "Row length separating narrow from wide single-row blocks");
}

void add_format_flags(CLI::App* cmd, CommonOptions* opts) {
  cmd->add_option("--format", opts->format, "Output format")
      ->check(CLI::IsMember({"json", "csv", "human"}));
  cmd->add_option("--output", opts->output, "Write output to this file");
}

void emit(const CommonOptions& opts, const std::string& text) {
  if (opts.output.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    std::ofstream out(opts.output);
    if (!out) throw std::runtime_error("cannot open '" + opts.output + "'");
    out << text;
  }
}

json bound_to_json(double v) {
  if (v == propgate::kInf) return "inf";
  if (v == -propgate::kInf) return "-inf";
  return v;
}

PropagationResult run_one(EngineId engine, const ProblemInstance& instance,
                          const EngineConfig& cfg) {
  return engine == EngineId::Seq ? propgate::propagate_sequential(instance, cfg)
                                 : propgate::propagate_parallel(instance, cfg);
}

json result_to_json(const std::string& instance_name, const std::string& engine,
                    const PropagationResult& result, bool dump_bounds) {
  json j{{"instance", instance_name},
         {"engine", engine},
         {"status", propgate::to_string(result.status)},
         {"rounds_executed", result.rounds_executed},
         {"total_bound_changes", result.total_bound_changes},
         {"per_round_changes", result.per_round_changes},
         {"constraints_processed", result.constraints_processed},
         {"elapsed_ns", result.elapsed.count()}};
  if (dump_bounds) {
    json lower = json::array();
    json upper = json::array();
    for (int v = 0; v < result.bounds.size(); ++v) {
      lower.push_back(bound_to_json(result.bounds.lower[v]));
      upper.push_back(bound_to_json(result.bounds.upper[v]));
    }
    j["lower"] = std::move(lower);
    j["upper"] = std::move(upper);
  }
  return j;
}

int status_exit_code(PropagationStatus status) {
  switch (status) {
    case PropagationStatus::Converged:
      return kExitOk;
    case PropagationStatus::RoundLimit:
      return kExitNotEqualOrLimit;
    case PropagationStatus::Infeasible:
      return kExitInfeasible;
  }
  return kExitUsage;
}

int cmd_run(const std::string& input, const CommonOptions& opts,
            bool dump_bounds) {
  const ProblemInstance instance = propgate::parse_mps_file(input);
  const EngineConfig cfg = opts.config();
  const EngineId engine = opts.engine == "par" ? EngineId::Par : EngineId::Seq;
  const PropagationResult result = run_one(engine, instance, cfg);

  if (opts.format == "json") {
    emit(opts,
         result_to_json(instance.name, opts.engine, result, dump_bounds).dump(2));
  } else if (opts.format == "csv") {
    std::ostringstream out;
    out << "instance,engine,status,rounds_executed,total_bound_changes,"
           "constraints_processed,elapsed_ns\n"
        << instance.name << ',' << opts.engine << ','
        << propgate::to_string(result.status) << ',' << result.rounds_executed
        << ',' << result.total_bound_changes << ','
        << result.constraints_processed << ',' << result.elapsed.count()
        << '\n';
    emit(opts, out.str());
  } else {
    std::ostringstream out;
    out << "instance:              " << instance.name << '\n'
        << "engine:                " << opts.engine << '\n'
        << "status:                " << propgate::to_string(result.status)
        << '\n'
        << "rounds executed:       " << result.rounds_executed << '\n'
        << "bound changes:         " << result.total_bound_changes << '\n'
        << "constraints processed: " << result.constraints_processed << '\n'
        << "elapsed:               " << result.elapsed.count() << " ns\n";
    if (dump_bounds) {
      for (int v = 0; v < result.bounds.size(); ++v) {
        out << "  x" << v << " in [" << result.bounds.lower[v] << ", "
            << result.bounds.upper[v] << "]\n";
      }
    }
    emit(opts, out.str());
  }
  return status_exit_code(result.status);
}

int cmd_compare(const std::string& input, const CommonOptions& opts,
                double t_abs, double t_rel) {
  const ProblemInstance instance = propgate::parse_mps_file(input);
  const EngineConfig cfg = opts.config();
  const PropagationResult reference = run_one(EngineId::Seq, instance, cfg);
  const PropagationResult test = run_one(EngineId::Par, instance, cfg);
  const propgate::ComparisonReport report =
      propgate::compare_results(reference, test, t_abs, t_rel);

  if (opts.format == "json") {
    json j{{"instance", instance.name},
           {"reference", "seq"},
           {"test", "par"},
           {"equal", report.equal},
           {"status_match", report.status_match},
           {"num_mismatches", report.num_mismatches},
           {"reference_status", propgate::to_string(reference.status)},
           {"test_status", propgate::to_string(test.status)},
           {"reference_rounds", reference.rounds_executed},
           {"test_rounds", test.rounds_executed}};
    if (report.first_mismatch) {
      j["first_mismatch"] = {
          {"var", report.first_mismatch->var},
          {"side",
           report.first_mismatch->side == propgate::BoundSide::Lower ? "lower"
                                                                     : "upper"},
          {"reference", bound_to_json(report.first_mismatch->reference)},
          {"tested", bound_to_json(report.first_mismatch->tested)}};
    } else {
      j["first_mismatch"] = nullptr;
    }
    emit(opts, j.dump(2));
  } else {
    std::ostringstream out;
    out << "instance:         " << instance.name << '\n'
        << "equal:            " << (report.equal ? "yes" : "no") << '\n'
        << "status:           seq=" << propgate::to_string(reference.status)
        << " par=" << propgate::to_string(test.status) << '\n'
        << "rounds:           seq=" << reference.rounds_executed
        << " par=" << test.rounds_executed << '\n'
        << "mismatches:       " << report.num_mismatches << '\n';
    if (report.first_mismatch) {
      out << "first mismatch:   x" << report.first_mismatch->var << " ("
          << (report.first_mismatch->side == propgate::BoundSide::Lower
                  ? "lower"
                  : "upper")
          << ") reference=" << report.first_mismatch->reference
          << " tested=" << report.first_mismatch->tested << '\n';
    }
    emit(opts, out.str());
  }

  if (!report.equal) return kExitNotEqualOrLimit;
  if (reference.status == PropagationStatus::Infeasible) return kExitInfeasible;
  return kExitOk;
}

int cmd_bench(const std::string& input, const CommonOptions& opts,
              const std::string& engines_arg, int repetitions,
              const std::string& baseline_arg) {
  std::vector<propgate::BenchInput> inputs;
  std::vector<std::filesystem::path> files;
  if (std::filesystem::is_directory(input)) {
    for (const auto& entry : std::filesystem::directory_iterator(input)) {
      if (entry.path().extension() == ".mps") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
  } else {
    files.emplace_back(input);
  }
  if (files.empty())
    throw std::runtime_error("no .mps instances found in '" + input + "'");
  for (const auto& file : files) {
    propgate::BenchInput bi;
    bi.instance = propgate::parse_mps_file(file.string());
    bi.name = file.stem().string();
    inputs.push_back(std::move(bi));
  }

  std::vector<EngineId> engines;
  std::stringstream ss(engines_arg);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "seq")
      engines.push_back(EngineId::Seq);
    else if (item == "par")
      engines.push_back(EngineId::Par);
    else
      throw std::runtime_error("unknown engine '" + item + "'");
  }

  propgate::BenchOptions bench_opts;
  bench_opts.repetitions = repetitions;
  bench_opts.baseline =
      baseline_arg == "par" ? EngineId::Par : EngineId::Seq;

  const propgate::BenchTable table =
      propgate::run_benchmark(inputs, engines, opts.config(), bench_opts);
  emit(opts, opts.format == "json" ? propgate::bench_to_json(table)
                                   : propgate::bench_to_csv(table));
  return kExitOk;
}

int cmd_gen(const std::string& kind, const std::string& output, int m,
            int rows, int cols, std::uint64_t seed) {
  ProblemInstance instance;
  if (kind == "cascade") {
    instance = propgate::gen_cascade(m);
  } else {
    propgate::RandomInstanceOptions options;
    options.num_rows = rows;
    options.num_cols = cols;
    options.seed = seed;
    instance = propgate::gen_random(options);
  }
  propgate::write_mps_file(instance, output);
  return kExitOk;
}

int cmd_permute(const std::string& input, const std::string& output,
                const std::string& perm_output, std::uint64_t seed) {
  const ProblemInstance instance = propgate::parse_mps_file(input);
  auto [permuted, perm] = propgate::permute_instance(instance, seed);
  propgate::write_mps_file(permuted, output);
  if (!perm_output.empty()) {
    json j{{"seed", perm.seed},
           {"row_perm", perm.row_perm},
           {"col_perm", perm.col_perm}};
    std::ofstream out(perm_output);
    if (!out)
      throw std::runtime_error("cannot open '" + perm_output + "'");
    out << j.dump(2) << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"propgate - domain propagation for bounded linear constraints"};
  app.require_subcommand(1);

  CommonOptions opts;

  auto* run = app.add_subcommand("run", "Propagate one instance");
  std::string run_input;
  bool dump_bounds = false;
  run->add_option("--input", run_input, "MPS instance")->required();
  run->add_flag("--dump-bounds", dump_bounds, "Include final bounds");
  add_engine_flags(run, &opts);
  add_format_flags(run, &opts);

  auto* compare =
      app.add_subcommand("compare", "Run both engines and compare bounds");
  std::string compare_input;
  double t_abs = 1e-8;
  double t_rel = 1e-5;
  compare->add_option("--input", compare_input, "MPS instance")->required();
  compare->add_option("--t-abs", t_abs, "Absolute comparison tolerance");
  compare->add_option("--t-rel", t_rel, "Relative comparison tolerance");
  add_engine_flags(compare, &opts);
  add_format_flags(compare, &opts);

  auto* bench = app.add_subcommand("bench", "Benchmark engines on a directory");
  std::string bench_input;
  std::string engines_arg = "seq,par";
  std::string baseline_arg = "seq";
  int repetitions = 3;
  bench->add_option("--input", bench_input, "Directory of .mps files or one file")
      ->required();
  bench->add_option("--engines", engines_arg, "Comma-separated engine list");
  bench->add_option("--baseline", baseline_arg, "Baseline engine for speedups")
      ->check(CLI::IsMember({"seq", "par"}));
  bench->add_option("--reps", repetitions, "Repetitions per instance (best-of)");
  add_engine_flags(bench, &opts);
  add_format_flags(bench, &opts);

  auto* gen = app.add_subcommand("gen", "Write a generated instance as MPS");
  std::string gen_kind = "cascade";
  std::string gen_output;
  int gen_m = 10;
  int gen_rows = 100;
  int gen_cols = 100;
  std::uint64_t seed = 0;
  gen->add_option("--kind", gen_kind, "Instance family")
      ->check(CLI::IsMember({"cascade", "random"}));
  gen->add_option("--output", gen_output, "Output MPS path")->required();
  gen->add_option("--m", gen_m, "Cascade length");
  gen->add_option("--rows", gen_rows, "Random instance constraints");
  gen->add_option("--cols", gen_cols, "Random instance variables");
  gen->add_option("--seed", seed, "Generator seed");

  auto* permute =
      app.add_subcommand("permute", "Permute constraints and variables");
  std::string permute_input;
  std::string permute_output;
  std::string perm_json;
  permute->add_option("--input", permute_input, "MPS instance")->required();
  permute->add_option("--output", permute_output, "Permuted MPS path")
      ->required();
  permute->add_option("--perm-output", perm_json,
                      "Write the permutation as JSON");
  permute->add_option("--seed", seed, "Permutation seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (run->parsed()) return cmd_run(run_input, opts, dump_bounds);
    if (compare->parsed()) return cmd_compare(compare_input, opts, t_abs, t_rel);
    if (bench->parsed())
      return cmd_bench(bench_input, opts, engines_arg, repetitions,
                       baseline_arg);
    if (gen->parsed())
      return cmd_gen(gen_kind, gen_output, gen_m, gen_rows, gen_cols, seed);
    if (permute->parsed())
      return cmd_permute(permute_input, permute_output, perm_json, seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
