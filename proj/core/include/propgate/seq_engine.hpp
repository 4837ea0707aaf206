#ifndef PROPGATE_SEQ_ENGINE_HPP
#define PROPGATE_SEQ_ENGINE_HPP

#include "propgate/model.hpp"

namespace propgate {

/// Sequential marking-based propagation.
///
/// All constraints start marked. Each round scans constraints in ascending
/// index, skipping unmarked ones; accepted tightenings take effect
/// immediately and re-mark every constraint containing the tightened
/// variable (including the one being processed). Terminates on a no-change
/// round, on infeasibility, or at cfg.round_limit.
PropagationResult propagate_sequential(const ProblemInstance& instance,
                                       const EngineConfig& cfg);

}  // namespace propgate

#endif  // PROPGATE_SEQ_ENGINE_HPP
