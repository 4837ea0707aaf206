#ifndef PROPGATE_GENERATORS_HPP
#define PROPGATE_GENERATORS_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "propgate/model.hpp"

namespace propgate {

/// Chain of m constraints x_k - x_{k-1} <= 0 over variables x_0..x_m with
/// x_0 fixed to [0, 0] and the rest in [0, 1e6]. Forward sequential
/// processing resolves the whole chain in a single sweep, while
/// round-synchronous propagation tightens exactly one bound per round.
/// Throws std::invalid_argument for m < 2.
ProblemInstance gen_cascade(int m);

struct RandomInstanceOptions {
  int num_rows = 100;
  int num_cols = 100;
  std::uint64_t seed = 0;
  double mean_row_nnz = 6.0;
  double integral_fraction = 0.3;
  double infinite_bound_fraction = 0.05;  // per side
  double infinite_side_fraction = 0.25;   // per constraint side
  long long max_nnz = 0;                  // 0 = no cap
};

/// Seeded random instance that is feasible by construction: sides are
/// placed around a random interior point, so propagation converges without
/// ever emptying a domain.
ProblemInstance gen_random(const RandomInstanceOptions& options);

struct PermutationPair {
  std::vector<int> row_perm;  // old constraint index -> new index
  std::vector<int> col_perm;  // old variable index -> new index
  std::uint64_t seed = 0;
};

/// Applies seed-deterministic Fisher-Yates permutations to rows and columns.
/// Returns the reordered instance (canonical within-row column order
/// restored) together with the permutations used.
std::pair<ProblemInstance, PermutationPair> permute_instance(
    const ProblemInstance& instance, std::uint64_t seed);

/// Undoes a column permutation on per-variable bounds: entry j of the
/// result is the permuted instance's value for original variable j.
VariableBounds unpermute_bounds(const VariableBounds& bounds,
                                const std::vector<int>& col_perm);

}  // namespace propgate

#endif  // PROPGATE_GENERATORS_HPP
