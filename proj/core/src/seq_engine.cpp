#include "propgate/seq_engine.hpp"

#include <chrono>

#include "engine_common.hpp"
#include "propgate/propcore.hpp"

namespace propgate {
namespace {

template <typename T>
PropagationResult run_sequential(const ProblemInstance& instance,
                                 const EngineConfig& cfg) {
  const SparseMatrix& mat = instance.matrix;
  const int num_rows = mat.num_rows;

  // One-time setup, excluded from timing: column view for marking plus the
  // working copy in the configured scalar type.
  const ColumnMajorMatrix csc = csr_to_csc(mat);
  auto w = detail::make_working_problem<T>(instance, cfg.infinity_threshold);

  PropagationResult result;
  if (detail::bounds_crossed(w.lower, w.upper, cfg.improvement_abs)) {
    result.status = PropagationStatus::Infeasible;
    result.bounds = detail::widen_bounds(w.lower, w.upper);
    return result;
  }

  std::vector<char> marked(static_cast<size_t>(num_rows), 1);

  const auto clock_start = std::chrono::steady_clock::now();
  for (int round = 1; round <= cfg.round_limit; ++round) {
    long long changes = 0;
    bool infeasible = false;

    for (int c = 0; c < num_rows && !infeasible; ++c) {
      if (!marked[c]) continue;
      marked[c] = 0;
      ++result.constraints_processed;

      const std::span<const int> cols = mat.row_cols(c);
      const std::span<const T> coefs{w.values.data() + mat.row_ptr[c],
                                     cols.size()};
      const ActivityRecordT<T> act =
          compute_row_activities<T>(cols, coefs, w.lower, w.upper);

      const RowStatus row_status =
          classify_constraint<T>(act, w.lhs[c], w.rhs[c], cfg);
      if (row_status == RowStatus::Infeasible) {
        infeasible = true;
        break;
      }
      if (row_status == RowStatus::Redundant) continue;

      for (size_t k = 0; k < cols.size(); ++k) {
        const int j = cols[k];
        const T a = coefs[k];
        const auto res = residual_activities<T>(act, a, w.lower[j], w.upper[j]);
        auto cand = compute_bound_candidates<T>(a, w.lhs[c], w.rhs[c],
                                                res.min_res, res.max_res,
                                                instance.integral[j] != 0, cfg);
        cand.var = j;
        const auto out = tighten<T>(w.lower[j], w.upper[j], cand, cfg);
        if (out.kind == TightenKind::EmptyDomain) {
          infeasible = true;
          break;
        }
        if (out.kind == TightenKind::NoChange) continue;
        if (out.changed_lower()) {
          w.lower[j] = out.new_lower;
          ++changes;
        }
        if (out.changed_upper()) {
          w.upper[j] = out.new_upper;
          ++changes;
        }
        for (int row : csc.col_rows(j)) marked[row] = 1;
      }
    }

    result.per_round_changes.push_back(changes);
    result.total_bound_changes += changes;
    result.rounds_executed = round;

    if (infeasible) {
      result.status = PropagationStatus::Infeasible;
      break;
    }
    if (changes == 0) {
      result.status = PropagationStatus::Converged;
      break;
    }
    if (round == cfg.round_limit) result.status = PropagationStatus::RoundLimit;
  }
  result.elapsed = std::chrono::steady_clock::now() - clock_start;

  result.bounds = detail::widen_bounds(w.lower, w.upper);
  return result;
}

}  // namespace

PropagationResult propagate_sequential(const ProblemInstance& instance,
                                       const EngineConfig& cfg) {
  cfg.validate();
  return cfg.scalar_mode == ScalarMode::Wide64
             ? run_sequential<double>(instance, cfg)
             : run_sequential<float>(instance, cfg);
}

}  // namespace propgate
