#ifndef PROPGATE_MODEL_HPP
#define PROPGATE_MODEL_HPP

#include <chrono>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace propgate {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Sparse constraint matrix in compressed-sparse-row layout.
///
/// Canonical form: row_ptr is nondecreasing with row_ptr[0] == 0 and
/// row_ptr[num_rows] == nnz, column indices are strictly increasing within
/// each row, and no stored coefficient is exactly zero.
struct SparseMatrix {
  int num_rows = 0;
  int num_cols = 0;
  std::vector<int> row_ptr{0};
  std::vector<int> col_idx;
  std::vector<double> values;

  int nnz() const { return static_cast<int>(col_idx.size()); }
  int row_nnz(int row) const { return row_ptr[row + 1] - row_ptr[row]; }

  std::span<const int> row_cols(int row) const {
    return {col_idx.data() + row_ptr[row],
            static_cast<size_t>(row_nnz(row))};
  }
  std::span<const double> row_values(int row) const {
    return {values.data() + row_ptr[row], static_cast<size_t>(row_nnz(row))};
  }
};

/// Column-major mirror of a SparseMatrix, used to find all constraints
/// containing a given variable.
struct ColumnMajorMatrix {
  int num_rows = 0;
  int num_cols = 0;
  std::vector<int> col_ptr{0};
  std::vector<int> row_idx;
  std::vector<double> values;

  int nnz() const { return static_cast<int>(row_idx.size()); }

  std::span<const int> col_rows(int col) const {
    return {row_idx.data() + col_ptr[col],
            static_cast<size_t>(col_ptr[col + 1] - col_ptr[col])};
  }
};

/// Per-variable lower/upper bounds. Infinite entries use IEEE infinities.
/// lower[j] > upper[j] is the infeasibility signal; lower[j] is never +inf
/// and upper[j] is never -inf.
struct VariableBounds {
  std::vector<double> lower;
  std::vector<double> upper;

  int size() const { return static_cast<int>(lower.size()); }
};

/// A system of linear constraints lhs <= A x <= rhs over bounded variables.
/// The objective is not stored; propagation never reads it.
struct ProblemInstance {
  std::string name;
  SparseMatrix matrix;
  std::vector<double> lhs;
  std::vector<double> rhs;
  VariableBounds bounds;
  std::vector<std::uint8_t> integral;

  int num_rows() const { return matrix.num_rows; }
  int num_cols() const { return matrix.num_cols; }
};

/// Finite parts of the minimum/maximum activity of one constraint together
/// with the number of infinite contributions to each sum. The effective
/// activity is the finite sum when the counter is zero and +-inf otherwise.
template <typename T>
struct ActivityRecordT {
  T min_finite = 0;
  T max_finite = 0;
  int min_inf_count = 0;
  int max_inf_count = 0;

  T min_activity() const {
    return min_inf_count == 0 ? min_finite : -std::numeric_limits<T>::infinity();
  }
  T max_activity() const {
    return max_inf_count == 0 ? max_finite : std::numeric_limits<T>::infinity();
  }
};

using ActivityRecord = ActivityRecordT<double>;

enum class BlockKind { Stream, VectorNarrow, VectorWide };

/// Contiguous row groups with a per-block execution kind. A Stream block has
/// at least two rows and at most nnz_budget non-zeros; Vector blocks hold a
/// single row, Narrow below vector_threshold non-zeros and Wide otherwise.
struct RowBlockPartition {
  std::vector<int> block_starts{0};
  std::vector<BlockKind> kinds;

  int num_blocks() const { return static_cast<int>(kinds.size()); }
};

enum class PropagationStatus { Converged, RoundLimit, Infeasible };

const char* to_string(PropagationStatus status);

/// Outcome of a propagation run. When the status is Converged the final
/// round is the confirming no-change round and is included in
/// rounds_executed; per_round_changes then ends in 0.
struct PropagationResult {
  VariableBounds bounds;
  PropagationStatus status = PropagationStatus::Converged;
  int rounds_executed = 0;
  long long total_bound_changes = 0;
  std::vector<long long> per_round_changes;
  long long constraints_processed = 0;
  std::chrono::nanoseconds elapsed{0};
};

enum class ScalarMode { Wide64, Narrow32 };

struct EngineConfig {
  int round_limit = 100;
  double infinity_threshold = 1e20;
  double improvement_abs = 1e-7;
  double improvement_rel = 1e-7;
  double integrality_eps = 1e-6;
  int nnz_budget = 1024;
  int vector_threshold = 64;
  int worker_count = 0;  // 0 = pick from hardware
  ScalarMode scalar_mode = ScalarMode::Wide64;

  /// Throws std::invalid_argument when a field violates its invariant.
  void validate() const;
};

/// Maps magnitudes at or above the infinity threshold to IEEE infinities.
inline double normalize_infinite(double v, double threshold) {
  if (v >= threshold) return kInf;
  if (v <= -threshold) return -kInf;
  return v;
}

/// Builds a canonical CSR matrix from (row, col, value) entries. Duplicate
/// entries are summed and exact zeros (after summation) dropped.
/// Throws std::out_of_range for indices outside the given dimensions.
SparseMatrix csr_from_triplets(
    std::span<const std::tuple<int, int, double>> entries, int num_rows,
    int num_cols);

/// Column-major copy of the same matrix.
ColumnMajorMatrix csr_to_csc(const SparseMatrix& matrix);

/// Row-major copy of a column-major matrix; inverse of csr_to_csc.
SparseMatrix csc_to_csr(const ColumnMajorMatrix& matrix);

}  // namespace propgate

#endif  // PROPGATE_MODEL_HPP
