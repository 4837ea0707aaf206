#include "propgate/generators.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <tuple>

#include "propgate/propcore.hpp"

namespace propgate {

ProblemInstance gen_cascade(int m) {
  if (m < 2) throw std::invalid_argument("gen_cascade requires m >= 2");

  constexpr double kChainBound = 1e6;
  const int n = m + 1;

  std::vector<std::tuple<int, int, double>> triplets;
  triplets.reserve(static_cast<size_t>(2 * m));
  for (int k = 1; k <= m; ++k) {
    triplets.emplace_back(k - 1, k - 1, -1.0);
    triplets.emplace_back(k - 1, k, 1.0);
  }

  ProblemInstance inst;
  inst.name = "cascade" + std::to_string(m);
  inst.matrix = csr_from_triplets(triplets, m, n);
  inst.lhs.assign(static_cast<size_t>(m), -kInf);
  inst.rhs.assign(static_cast<size_t>(m), 0.0);
  inst.bounds.lower.assign(static_cast<size_t>(n), 0.0);
  inst.bounds.upper.assign(static_cast<size_t>(n), kChainBound);
  inst.bounds.upper[0] = 0.0;
  inst.integral.assign(static_cast<size_t>(n), 0);
  return inst;
}

namespace {

int draw_index(std::mt19937_64& rng, int bound) {
  return static_cast<int>(rng() % static_cast<std::uint64_t>(bound));
}

}  // namespace

ProblemInstance gen_random(const RandomInstanceOptions& options) {
  if (options.num_rows < 1 || options.num_cols < 1)
    throw std::invalid_argument("gen_random requires positive dimensions");

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> coef_dist(-10.0, 10.0);
  std::uniform_real_distribution<double> bound_dist(-100.0, 100.0);

  const int m = options.num_rows;
  const int n = options.num_cols;

  ProblemInstance inst;
  inst.name = "random_r" + std::to_string(m) + "_c" + std::to_string(n) +
              "_s" + std::to_string(options.seed);
  inst.bounds.lower.resize(static_cast<size_t>(n));
  inst.bounds.upper.resize(static_cast<size_t>(n));
  inst.integral.resize(static_cast<size_t>(n));

  // Interior point kept feasible by every generated constraint.
  std::vector<double> point(static_cast<size_t>(n));

  for (int j = 0; j < n; ++j) {
    const bool integer = unit(rng) < options.integral_fraction;
    inst.integral[j] = integer ? 1 : 0;
    double lo = bound_dist(rng);
    double up = bound_dist(rng);
    if (lo > up) std::swap(lo, up);
    if (integer) {
      lo = std::floor(lo);
      up = std::ceil(up);
    }
    if (unit(rng) < options.infinite_bound_fraction) lo = -kInf;
    if (unit(rng) < options.infinite_bound_fraction) up = kInf;
    inst.bounds.lower[j] = lo;
    inst.bounds.upper[j] = up;

    double x;
    if (std::isfinite(lo) && std::isfinite(up))
      x = lo + unit(rng) * (up - lo);
    else if (std::isfinite(lo))
      x = lo + 50.0 * unit(rng);
    else if (std::isfinite(up))
      x = up - 50.0 * unit(rng);
    else
      x = 100.0 * unit(rng) - 50.0;
    if (integer) {
      x = std::round(x);
      if (std::isfinite(lo)) x = std::max(x, lo);
      if (std::isfinite(up)) x = std::min(x, up);
    }
    point[j] = x;
  }

  // Row lengths 1 + geometric, calibrated so the mean equals mean_row_nnz.
  const double p_stop = 1.0 / std::max(1.1, options.mean_row_nnz);
  std::geometric_distribution<int> extra_dist(p_stop);

  std::vector<std::tuple<int, int, double>> triplets;
  std::vector<char> used(static_cast<size_t>(n), 0);
  std::vector<int> row_cols;
  inst.lhs.resize(static_cast<size_t>(m));
  inst.rhs.resize(static_cast<size_t>(m));
  long long nnz = 0;

  for (int i = 0; i < m; ++i) {
    int len = 1 + extra_dist(rng);
    len = std::min(len, n);
    if (options.max_nnz > 0 && nnz + len > options.max_nnz)
      len = static_cast<int>(std::max<long long>(0, options.max_nnz - nnz));
    nnz += len;

    row_cols.clear();
    while (static_cast<int>(row_cols.size()) < len) {
      const int j = draw_index(rng, n);
      if (!used[j]) {
        used[j] = 1;
        row_cols.push_back(j);
      }
    }
    for (int j : row_cols) used[j] = 0;
    std::sort(row_cols.begin(), row_cols.end());

    double value_at_point = 0.0;
    std::vector<double> coefs(row_cols.size());
    for (size_t k = 0; k < row_cols.size(); ++k) {
      double a = coef_dist(rng);
      while (std::fabs(a) < 0.1) a = coef_dist(rng);
      coefs[k] = a;
      value_at_point += a * point[row_cols[k]];
      triplets.emplace_back(i, row_cols[k], a);
    }

    const auto act = compute_row_activities<double>(
        row_cols, coefs, inst.bounds.lower, inst.bounds.upper);
    const double act_min = act.min_activity();
    const double act_max = act.max_activity();

    bool rhs_infinite = unit(rng) < options.infinite_side_fraction;
    const bool lhs_infinite =
        !rhs_infinite && unit(rng) < options.infinite_side_fraction;

    if (rhs_infinite) {
      inst.rhs[i] = kInf;
    } else {
      const double t = unit(rng);
      inst.rhs[i] = std::isfinite(act_max)
                        ? value_at_point + t * t * (act_max - value_at_point)
                        : value_at_point + 20.0 * t;
    }
    if (lhs_infinite) {
      inst.lhs[i] = -kInf;
    } else {
      const double t = unit(rng);
      inst.lhs[i] = std::isfinite(act_min)
                        ? value_at_point - t * t * (value_at_point - act_min)
                        : value_at_point - 20.0 * t;
    }
  }

  inst.matrix = csr_from_triplets(triplets, m, n);
  return inst;
}

namespace {

// Fisher-Yates; perm[old] = new position.
std::vector<int> random_permutation(int size, std::mt19937_64& rng) {
  std::vector<int> order(static_cast<size_t>(size));
  for (int i = 0; i < size; ++i) order[i] = i;
  for (int i = size - 1; i > 0; --i) {
    const int k = draw_index(rng, i + 1);
    std::swap(order[i], order[k]);
  }
  std::vector<int> perm(static_cast<size_t>(size));
  for (int pos = 0; pos < size; ++pos) perm[order[pos]] = pos;
  return perm;
}

}  // namespace

std::pair<ProblemInstance, PermutationPair> permute_instance(
    const ProblemInstance& instance, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  PermutationPair perm;
  perm.seed = seed;
  perm.row_perm = random_permutation(instance.num_rows(), rng);
  perm.col_perm = random_permutation(instance.num_cols(), rng);

  const SparseMatrix& mat = instance.matrix;
  std::vector<std::tuple<int, int, double>> triplets;
  triplets.reserve(static_cast<size_t>(mat.nnz()));
  for (int i = 0; i < mat.num_rows; ++i) {
    for (int k = mat.row_ptr[i]; k < mat.row_ptr[i + 1]; ++k) {
      triplets.emplace_back(perm.row_perm[i], perm.col_perm[mat.col_idx[k]],
                            mat.values[k]);
    }
  }

  ProblemInstance out;
  out.name = instance.name + "_perm" + std::to_string(seed);
  out.matrix = csr_from_triplets(triplets, mat.num_rows, mat.num_cols);
  out.lhs.resize(instance.lhs.size());
  out.rhs.resize(instance.rhs.size());
  for (int i = 0; i < mat.num_rows; ++i) {
    out.lhs[perm.row_perm[i]] = instance.lhs[i];
    out.rhs[perm.row_perm[i]] = instance.rhs[i];
  }
  out.bounds.lower.resize(instance.bounds.lower.size());
  out.bounds.upper.resize(instance.bounds.upper.size());
  out.integral.resize(instance.integral.size());
  for (int j = 0; j < mat.num_cols; ++j) {
    out.bounds.lower[perm.col_perm[j]] = instance.bounds.lower[j];
    out.bounds.upper[perm.col_perm[j]] = instance.bounds.upper[j];
    out.integral[perm.col_perm[j]] = instance.integral[j];
  }
  return {std::move(out), std::move(perm)};
}

VariableBounds unpermute_bounds(const VariableBounds& bounds,
                                const std::vector<int>& col_perm) {
  VariableBounds out;
  out.lower.resize(bounds.lower.size());
  out.upper.resize(bounds.upper.size());
  for (size_t j = 0; j < col_perm.size(); ++j) {
    out.lower[j] = bounds.lower[col_perm[j]];
    out.upper[j] = bounds.upper[col_perm[j]];
  }
  return out;
}

}  // namespace propgate
