#include "propgate/par_engine.hpp"

#include <atomic>
#include <chrono>
#include <span>
#include <vector>

#include "engine_common.hpp"
#include "propgate/propcore.hpp"
#include "worker_pool.hpp"

namespace propgate {

RowBlockPartition partition_row_blocks(const SparseMatrix& matrix,
                                       const EngineConfig& cfg) {
  RowBlockPartition partition;
  int row = 0;
  while (row < matrix.num_rows) {
    int end = row;
    long long acc = 0;
    while (end < matrix.num_rows &&
           acc + matrix.row_nnz(end) <= cfg.nnz_budget) {
      acc += matrix.row_nnz(end);
      ++end;
    }
    if (end - row >= 2) {
      partition.block_starts.push_back(end);
      partition.kinds.push_back(BlockKind::Stream);
      row = end;
    } else {
      // Alone in its block: either the row exceeds the budget by itself or
      // no neighbor fits next to it.
      partition.block_starts.push_back(row + 1);
      partition.kinds.push_back(matrix.row_nnz(row) < cfg.vector_threshold
                                    ? BlockKind::VectorNarrow
                                    : BlockKind::VectorWide);
      row = row + 1;
    }
  }
  return partition;
}

namespace {

template <typename T>
ActivityRecordT<T> combine(const ActivityRecordT<T>& a,
                           const ActivityRecordT<T>& b) {
  return {a.min_finite + b.min_finite, a.max_finite + b.max_finite,
          a.min_inf_count + b.min_inf_count, a.max_inf_count + b.max_inf_count};
}

// Monotone merge: keep the max of lower candidates / min of upper
// candidates. Exact operations, so the result is independent of the order
// in which workers apply them.
template <typename T>
void merge_lower(T* slot, T v) {
  std::atomic_ref<T> ref(*slot);
  T cur = ref.load(std::memory_order_relaxed);
  while (cur < v &&
         !ref.compare_exchange_weak(cur, v, std::memory_order_relaxed)) {
  }
}

template <typename T>
void merge_upper(T* slot, T v) {
  std::atomic_ref<T> ref(*slot);
  T cur = ref.load(std::memory_order_relaxed);
  while (cur > v &&
         !ref.compare_exchange_weak(cur, v, std::memory_order_relaxed)) {
  }
}

template <typename T>
struct RoundContext {
  const SparseMatrix* mat = nullptr;
  std::span<const T> values;
  std::span<const T> lhs;
  std::span<const T> rhs;
  std::span<const std::uint8_t> integral;
  std::span<const T> lower_in;
  std::span<const T> upper_in;
  std::span<T> lower_out;
  std::span<T> upper_out;
  const RowBlockPartition* partition = nullptr;
  const EngineConfig* cfg = nullptr;
  std::atomic<int> next_block{0};
  std::atomic<bool> infeasible{false};
};

template <typename T>
struct WorkerScratch {
  std::vector<ActivityRecordT<T>> activities;  // one per row of the block
  std::vector<ActivityRecordT<T>> partials;    // chunk sums of a wide row
};

// Chunked reduction of one long row: partial sums over fixed-size chunks,
// combined pairwise in index order.
template <typename T>
ActivityRecordT<T> wide_row_activities(const RoundContext<T>& ctx, int row,
                                       WorkerScratch<T>& scratch) {
  const SparseMatrix& mat = *ctx.mat;
  const int begin = mat.row_ptr[row];
  const int end = mat.row_ptr[row + 1];
  const int chunk = ctx.cfg->nnz_budget;

  auto& parts = scratch.partials;
  parts.clear();
  for (int k = begin; k < end; k += chunk) {
    const size_t len = static_cast<size_t>(std::min(end - k, chunk));
    parts.push_back(compute_row_activities<T>(
        std::span<const int>{mat.col_idx.data() + k, len},
        ctx.values.subspan(static_cast<size_t>(k), len), ctx.lower_in,
        ctx.upper_in));
  }
  while (parts.size() > 1) {
    size_t out = 0;
    for (size_t i = 0; i + 1 < parts.size(); i += 2)
      parts[out++] = combine(parts[i], parts[i + 1]);
    if (parts.size() % 2 == 1) parts[out++] = parts.back();
    parts.resize(out);
  }
  return parts.empty() ? ActivityRecordT<T>{} : parts.front();
}

template <typename T>
void process_block(RoundContext<T>& ctx, int block,
                   WorkerScratch<T>& scratch) {
  const SparseMatrix& mat = *ctx.mat;
  const RowBlockPartition& partition = *ctx.partition;
  const EngineConfig& cfg = *ctx.cfg;
  const int start_row = partition.block_starts[block];
  const int end_row = partition.block_starts[block + 1];
  const BlockKind kind = partition.kinds[block];

  scratch.activities.clear();
  for (int row = start_row; row < end_row; ++row) {
    if (kind == BlockKind::VectorWide) {
      scratch.activities.push_back(wide_row_activities(ctx, row, scratch));
    } else {
      const auto cols = mat.row_cols(row);
      scratch.activities.push_back(compute_row_activities<T>(
          cols, ctx.values.subspan(static_cast<size_t>(mat.row_ptr[row]),
                                   cols.size()),
          ctx.lower_in, ctx.upper_in));
    }
  }

  for (int row = start_row; row < end_row; ++row) {
    const ActivityRecordT<T>& act =
        scratch.activities[static_cast<size_t>(row - start_row)];
    const auto cols = mat.row_cols(row);
    for (size_t k = 0; k < cols.size(); ++k) {
      const int j = cols[k];
      const T a = ctx.values[static_cast<size_t>(mat.row_ptr[row]) + k];
      const auto res =
          residual_activities<T>(act, a, ctx.lower_in[j], ctx.upper_in[j]);
      auto cand = compute_bound_candidates<T>(a, ctx.lhs[row], ctx.rhs[row],
                                              res.min_res, res.max_res,
                                              ctx.integral[j] != 0, cfg);
      cand.var = j;
      // Discard filter and acceptance both read the frozen round input.
      const auto out = tighten<T>(ctx.lower_in[j], ctx.upper_in[j], cand, cfg);
      if (out.kind == TightenKind::EmptyDomain) {
        ctx.infeasible.store(true, std::memory_order_relaxed);
        continue;
      }
      if (out.changed_lower()) merge_lower(&ctx.lower_out[j], out.new_lower);
      if (out.changed_upper()) merge_upper(&ctx.upper_out[j], out.new_upper);
    }
  }
}

template <typename T>
RoundOutcome run_round(RoundContext<T>& ctx, detail::WorkerPool& pool,
                       std::vector<WorkerScratch<T>>& scratch) {
  ctx.next_block.store(0, std::memory_order_relaxed);
  ctx.infeasible.store(false, std::memory_order_relaxed);
  const int num_blocks = ctx.partition->num_blocks();

  pool.run([&](int worker) {
    auto& local = scratch[static_cast<size_t>(worker)];
    int block;
    while ((block = ctx.next_block.fetch_add(1, std::memory_order_relaxed)) <
           num_blocks) {
      process_block(ctx, block, local);
    }
  });

  RoundOutcome outcome;
  outcome.infeasible = ctx.infeasible.load(std::memory_order_relaxed);
  for (size_t j = 0; j < ctx.lower_out.size(); ++j) {
    if (ctx.lower_out[j] != ctx.lower_in[j]) ++outcome.changes;
    if (ctx.upper_out[j] != ctx.upper_in[j]) ++outcome.changes;
    if (static_cast<double>(ctx.lower_out[j]) >
        static_cast<double>(ctx.upper_out[j]) + ctx.cfg->improvement_abs)
      outcome.infeasible = true;
  }
  outcome.changed = outcome.changes > 0;
  return outcome;
}

template <typename T>
PropagationResult run_parallel(const ProblemInstance& instance,
                               const EngineConfig& cfg) {
  const SparseMatrix& mat = instance.matrix;

  // Initialization, excluded from timing: partitioning, working copies,
  // worker startup.
  const RowBlockPartition partition = partition_row_blocks(mat, cfg);
  auto w = detail::make_working_problem<T>(instance, cfg.infinity_threshold);

  PropagationResult result;
  if (detail::bounds_crossed(w.lower, w.upper, cfg.improvement_abs)) {
    result.status = PropagationStatus::Infeasible;
    result.bounds = detail::widen_bounds(w.lower, w.upper);
    return result;
  }

  const int workers = detail::resolve_worker_count(cfg.worker_count);
  detail::WorkerPool pool(workers);
  std::vector<WorkerScratch<T>> scratch(static_cast<size_t>(workers));

  std::vector<T> lower_in = std::move(w.lower);
  std::vector<T> upper_in = std::move(w.upper);
  std::vector<T> lower_out = lower_in;
  std::vector<T> upper_out = upper_in;

  const auto clock_start = std::chrono::steady_clock::now();
  for (int round = 1; round <= cfg.round_limit; ++round) {
    lower_out = lower_in;
    upper_out = upper_in;

    RoundContext<T> ctx;
    ctx.mat = &mat;
    ctx.values = w.values;
    ctx.lhs = w.lhs;
    ctx.rhs = w.rhs;
    ctx.integral = instance.integral;
    ctx.lower_in = lower_in;
    ctx.upper_in = upper_in;
    ctx.lower_out = lower_out;
    ctx.upper_out = upper_out;
    ctx.partition = &partition;
    ctx.cfg = &cfg;

    const RoundOutcome outcome = run_round(ctx, pool, scratch);

    result.per_round_changes.push_back(outcome.changes);
    result.total_bound_changes += outcome.changes;
    result.rounds_executed = round;
    result.constraints_processed += mat.num_rows;

    if (outcome.infeasible) {
      result.status = PropagationStatus::Infeasible;
      break;
    }
    if (!outcome.changed) {
      result.status = PropagationStatus::Converged;
      break;
    }
    if (round == cfg.round_limit) {
      result.status = PropagationStatus::RoundLimit;
      break;
    }
    std::swap(lower_in, lower_out);
    std::swap(upper_in, upper_out);
  }
  result.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(
      std::chrono::steady_clock::now() - clock_start);

  result.bounds = detail::widen_bounds(lower_out, upper_out);
  return result;
}

}  // namespace

RoundOutcome propagate_round_parallel(const ProblemInstance& instance,
                                      RoundSnapshot& snap,
                                      const RowBlockPartition& partition,
                                      const EngineConfig& cfg) {
  cfg.validate();
  auto w = detail::make_working_problem<double>(instance, cfg.infinity_threshold);

  std::vector<double> lower_in(snap.bounds_in.lower);
  std::vector<double> upper_in(snap.bounds_in.upper);
  for (auto& v : lower_in) v = normalize_infinite(v, cfg.infinity_threshold);
  for (auto& v : upper_in) v = normalize_infinite(v, cfg.infinity_threshold);
  std::vector<double> lower_out = lower_in;
  std::vector<double> upper_out = upper_in;

  const int workers = detail::resolve_worker_count(cfg.worker_count);
  detail::WorkerPool pool(workers);
  std::vector<WorkerScratch<double>> scratch(static_cast<size_t>(workers));

  RoundContext<double> ctx;
  ctx.mat = &instance.matrix;
  ctx.values = w.values;
  ctx.lhs = w.lhs;
  ctx.rhs = w.rhs;
  ctx.integral = instance.integral;
  ctx.lower_in = lower_in;
  ctx.upper_in = upper_in;
  ctx.lower_out = lower_out;
  ctx.upper_out = upper_out;
  ctx.partition = &partition;
  ctx.cfg = &cfg;

  const RoundOutcome outcome = run_round(ctx, pool, scratch);
  snap.bounds_out.lower = std::move(lower_out);
  snap.bounds_out.upper = std::move(upper_out);
  return outcome;
}

PropagationResult propagate_parallel(const ProblemInstance& instance,
                                     const EngineConfig& cfg) {
  cfg.validate();
  return cfg.scalar_mode == ScalarMode::Wide64
             ? run_parallel<double>(instance, cfg)
             : run_parallel<float>(instance, cfg);
}

}  // namespace propgate
