#ifndef PROPGATE_TESTS_TEST_UTIL_HPP
#define PROPGATE_TESTS_TEST_UTIL_HPP

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "propgate/model.hpp"
#include "propgate/propcore.hpp"

namespace propgate::test {

// Brute-force oracle for row activities: two independent passes over the
// entries, explicit infinity short-circuiting, always in 64-bit. Kept free
// of any shared code path with compute_row_activities.
struct OracleActivities {
  double min_finite = 0;
  double max_finite = 0;
  int min_inf = 0;
  int max_inf = 0;

  double min_effective() const { return min_inf == 0 ? min_finite : -kInf; }
  double max_effective() const { return max_inf == 0 ? max_finite : kInf; }
};

inline OracleActivities oracle_row_activities(
    const std::vector<int>& cols, const std::vector<double>& coefs,
    const std::vector<double>& lower, const std::vector<double>& upper) {
  OracleActivities o;
  for (size_t k = 0; k < cols.size(); ++k) {
    const double b =
        coefs[k] > 0 ? lower[cols[k]] : upper[cols[k]];
    if (std::isinf(b))
      o.min_inf += 1;
    else
      o.min_finite += coefs[k] * b;
  }
  for (size_t k = 0; k < cols.size(); ++k) {
    const double b =
        coefs[k] > 0 ? upper[cols[k]] : lower[cols[k]];
    if (std::isinf(b))
      o.max_inf += 1;
    else
      o.max_finite += coefs[k] * b;
  }
  return o;
}

// Residual oracle: recompute the activity sums from scratch with entry k
// excluded.
inline OracleActivities oracle_residual(const std::vector<int>& cols,
                                        const std::vector<double>& coefs,
                                        const std::vector<double>& lower,
                                        const std::vector<double>& upper,
                                        size_t excluded) {
  std::vector<int> c;
  std::vector<double> a;
  for (size_t k = 0; k < cols.size(); ++k) {
    if (k == excluded) continue;
    c.push_back(cols[k]);
    a.push_back(coefs[k]);
  }
  return oracle_row_activities(c, a, lower, upper);
}

struct RandomRow {
  std::vector<int> cols;
  std::vector<double> coefs;
  std::vector<double> lower;
  std::vector<double> upper;
};

// Random dense-indexed row with independently injected infinite bounds.
inline RandomRow random_row(std::mt19937_64& rng, int max_len = 10,
                            double inf_prob = 0.2) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> mag(0.1, 10.0);
  std::uniform_real_distribution<double> bound(-50.0, 50.0);

  RandomRow row;
  const int len = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_len));
  row.lower.resize(static_cast<size_t>(len));
  row.upper.resize(static_cast<size_t>(len));
  for (int k = 0; k < len; ++k) {
    row.cols.push_back(k);
    row.coefs.push_back((unit(rng) < 0.5 ? 1.0 : -1.0) * mag(rng));
    double lo = bound(rng);
    double up = bound(rng);
    if (lo > up) std::swap(lo, up);
    if (unit(rng) < inf_prob) lo = -kInf;
    if (unit(rng) < inf_prob) up = kInf;
    row.lower[static_cast<size_t>(k)] = lo;
    row.upper[static_cast<size_t>(k)] = up;
  }
  return row;
}

// Mark-free reference propagator: rescans every constraint in every round,
// same per-constraint math, immediate bound updates. Serves as the oracle
// for the marking mechanism.
struct RescanResult {
  VariableBounds bounds;
  PropagationStatus status = PropagationStatus::Converged;
  int rounds = 0;
  long long constraints_processed = 0;
  std::vector<long long> per_round_changes;
};

inline RescanResult propagate_rescan_all(const ProblemInstance& instance,
                                         const EngineConfig& cfg) {
  const SparseMatrix& mat = instance.matrix;
  std::vector<double> lower = instance.bounds.lower;
  std::vector<double> upper = instance.bounds.upper;
  for (auto& v : lower) v = normalize_infinite(v, cfg.infinity_threshold);
  for (auto& v : upper) v = normalize_infinite(v, cfg.infinity_threshold);

  RescanResult result;
  for (int round = 1; round <= cfg.round_limit; ++round) {
    long long changes = 0;
    bool infeasible = false;
    for (int c = 0; c < mat.num_rows && !infeasible; ++c) {
      ++result.constraints_processed;
      const auto cols = mat.row_cols(c);
      const auto coefs = mat.row_values(c);
      const auto act = compute_row_activities<double>(cols, coefs, lower, upper);
      const RowStatus rs =
          classify_constraint<double>(act, instance.lhs[c], instance.rhs[c], cfg);
      if (rs == RowStatus::Infeasible) {
        infeasible = true;
        break;
      }
      if (rs == RowStatus::Redundant) continue;
      for (size_t k = 0; k < cols.size(); ++k) {
        const int j = cols[k];
        const auto res =
            residual_activities<double>(act, coefs[k], lower[j], upper[j]);
        auto cand = compute_bound_candidates<double>(
            coefs[k], instance.lhs[c], instance.rhs[c], res.min_res,
            res.max_res, instance.integral[j] != 0, cfg);
        const auto out = tighten<double>(lower[j], upper[j], cand, cfg);
        if (out.kind == TightenKind::EmptyDomain) {
          infeasible = true;
          break;
        }
        if (out.changed_lower()) {
          lower[j] = out.new_lower;
          ++changes;
        }
        if (out.changed_upper()) {
          upper[j] = out.new_upper;
          ++changes;
        }
      }
    }
    result.per_round_changes.push_back(changes);
    result.rounds = round;
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
  result.bounds.lower = std::move(lower);
  result.bounds.upper = std::move(upper);
  return result;
}

}  // namespace propgate::test

#endif  // PROPGATE_TESTS_TEST_UTIL_HPP
