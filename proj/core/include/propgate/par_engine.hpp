#ifndef PROPGATE_PAR_ENGINE_HPP
#define PROPGATE_PAR_ENGINE_HPP

#include "propgate/model.hpp"

namespace propgate {

/// Greedy left-to-right grouping of rows into execution blocks. Consecutive
/// short rows share a Stream block as long as their combined non-zeros fit
/// into cfg.nnz_budget; a row left alone becomes a Vector block, Narrow or
/// Wide depending on cfg.vector_threshold.
RowBlockPartition partition_row_blocks(const SparseMatrix& matrix,
                                       const EngineConfig& cfg);

/// Double-precision state of one round-synchronous propagation round.
/// bounds_in is frozen for the round; bounds_out accumulates the
/// per-variable monotone merges of all accepted candidates.
struct RoundSnapshot {
  VariableBounds bounds_in;
  VariableBounds bounds_out;
};

struct RoundOutcome {
  bool changed = false;
  bool infeasible = false;
  long long changes = 0;
};

/// Executes one propagation round over all row blocks. All reads (activities,
/// candidates, the discard filter) use snap.bounds_in; accepted candidates
/// fold into snap.bounds_out. The merge is commutative and associative, so
/// the outcome does not depend on worker scheduling.
RoundOutcome propagate_round_parallel(const ProblemInstance& instance,
                                      RoundSnapshot& snap,
                                      const RowBlockPartition& partition,
                                      const EngineConfig& cfg);

/// Round-synchronous propagation: repeats propagate_round_parallel with the
/// output bounds of round k feeding round k+1, until a round reports no
/// change, infeasibility, or cfg.round_limit is reached.
PropagationResult propagate_parallel(const ProblemInstance& instance,
                                     const EngineConfig& cfg);

}  // namespace propgate

#endif  // PROPGATE_PAR_ENGINE_HPP
