#include "propgate/model.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace propgate {

const char* to_string(PropagationStatus status) {
  switch (status) {
    case PropagationStatus::Converged:
      return "Converged";
    case PropagationStatus::RoundLimit:
      return "RoundLimit";
    case PropagationStatus::Infeasible:
      return "Infeasible";
  }
  return "Unknown";
}

void EngineConfig::validate() const {
  if (round_limit < 1) throw std::invalid_argument("round_limit must be >= 1");
  if (!(infinity_threshold > 0))
    throw std::invalid_argument("infinity_threshold must be positive");
  if (!(improvement_abs > 0) || !(improvement_rel > 0))
    throw std::invalid_argument("improvement tolerances must be positive");
  if (!(integrality_eps > 0))
    throw std::invalid_argument("integrality_eps must be positive");
  if (vector_threshold < 1)
    throw std::invalid_argument("vector_threshold must be >= 1");
  if (nnz_budget < vector_threshold)
    throw std::invalid_argument("nnz_budget must be >= vector_threshold");
  if (worker_count < 0)
    throw std::invalid_argument("worker_count must be >= 0");
}

SparseMatrix csr_from_triplets(
    std::span<const std::tuple<int, int, double>> entries, int num_rows,
    int num_cols) {
  for (const auto& [row, col, value] : entries) {
    if (row < 0 || row >= num_rows)
      throw std::out_of_range("triplet row index out of range");
    if (col < 0 || col >= num_cols)
      throw std::out_of_range("triplet column index out of range");
  }

  std::vector<std::tuple<int, int, double>> sorted(entries.begin(),
                                                   entries.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) {
                     return std::tie(std::get<0>(a), std::get<1>(a)) <
                            std::tie(std::get<0>(b), std::get<1>(b));
                   });

  SparseMatrix m;
  m.num_rows = num_rows;
  m.num_cols = num_cols;
  m.row_ptr.assign(static_cast<size_t>(num_rows) + 1, 0);
  m.col_idx.reserve(sorted.size());
  m.values.reserve(sorted.size());

  size_t i = 0;
  for (int row = 0; row < num_rows; ++row) {
    while (i < sorted.size() && std::get<0>(sorted[i]) == row) {
      const int col = std::get<1>(sorted[i]);
      double sum = 0.0;
      while (i < sorted.size() && std::get<0>(sorted[i]) == row &&
             std::get<1>(sorted[i]) == col) {
        sum += std::get<2>(sorted[i]);
        ++i;
      }
      if (sum != 0.0) {
        m.col_idx.push_back(col);
        m.values.push_back(sum);
      }
    }
    m.row_ptr[static_cast<size_t>(row) + 1] = static_cast<int>(m.col_idx.size());
  }
  return m;
}

ColumnMajorMatrix csr_to_csc(const SparseMatrix& matrix) {
  ColumnMajorMatrix c;
  c.num_rows = matrix.num_rows;
  c.num_cols = matrix.num_cols;
  c.col_ptr.assign(static_cast<size_t>(matrix.num_cols) + 1, 0);
  c.row_idx.resize(matrix.col_idx.size());
  c.values.resize(matrix.values.size());

  for (int col : matrix.col_idx) ++c.col_ptr[static_cast<size_t>(col) + 1];
  for (int j = 0; j < matrix.num_cols; ++j)
    c.col_ptr[static_cast<size_t>(j) + 1] += c.col_ptr[j];

  std::vector<int> next(c.col_ptr.begin(), c.col_ptr.end() - 1);
  for (int row = 0; row < matrix.num_rows; ++row) {
    for (int k = matrix.row_ptr[row]; k < matrix.row_ptr[row + 1]; ++k) {
      const int col = matrix.col_idx[k];
      const int dst = next[col]++;
      c.row_idx[dst] = row;
      c.values[dst] = matrix.values[k];
    }
  }
  return c;
}

SparseMatrix csc_to_csr(const ColumnMajorMatrix& matrix) {
  SparseMatrix m;
  m.num_rows = matrix.num_rows;
  m.num_cols = matrix.num_cols;
  m.row_ptr.assign(static_cast<size_t>(matrix.num_rows) + 1, 0);
  m.col_idx.resize(matrix.row_idx.size());
  m.values.resize(matrix.values.size());

  for (int row : matrix.row_idx) ++m.row_ptr[static_cast<size_t>(row) + 1];
  for (int i = 0; i < matrix.num_rows; ++i)
    m.row_ptr[static_cast<size_t>(i) + 1] += m.row_ptr[i];

  std::vector<int> next(m.row_ptr.begin(), m.row_ptr.end() - 1);
  for (int col = 0; col < matrix.num_cols; ++col) {
    for (int k = matrix.col_ptr[col]; k < matrix.col_ptr[col + 1]; ++k) {
      const int row = matrix.row_idx[k];
      const int dst = next[row]++;
      m.col_idx[dst] = col;
      m.values[dst] = matrix.values[k];
    }
  }
  return m;
}

}  // namespace propgate
