#ifndef PROPGATE_PROPCORE_HPP
#define PROPGATE_PROPCORE_HPP

#include <algorithm>
#include <cmath>
#include <span>

#include "propgate/model.hpp"

namespace propgate {

/// Bound candidates one constraint entry implies for one variable.
/// An infinite value means "no tightening from this entry" on that side.
template <typename T>
struct BoundCandidate {
  int var = -1;
  T new_lower = -std::numeric_limits<T>::infinity();
  T new_upper = std::numeric_limits<T>::infinity();
};

enum class RowStatus { Redundant, Infeasible, Propagatable };

enum class TightenKind { NoChange, NewLower, NewUpper, Both, EmptyDomain };

/// Accepted bound updates for one variable. new_lower is meaningful for
/// NewLower/Both, new_upper for NewUpper/Both.
template <typename T>
struct TightenOutcome {
  TightenKind kind = TightenKind::NoChange;
  T new_lower = 0;
  T new_upper = 0;

  bool changed_lower() const {
    return kind == TightenKind::NewLower || kind == TightenKind::Both;
  }
  bool changed_upper() const {
    return kind == TightenKind::NewUpper || kind == TightenKind::Both;
  }
};

/// Minimum and maximum activity of one row under the given bounds.
/// Infinite contributions are counted, never summed, so the finite parts
/// stay meaningful when a bound is infinite.
template <typename T>
ActivityRecordT<T> compute_row_activities(std::span<const int> cols,
                                          std::span<const T> coefs,
                                          std::span<const T> lower,
                                          std::span<const T> upper) {
  ActivityRecordT<T> act;
  for (size_t k = 0; k < cols.size(); ++k) {
    const int j = cols[k];
    const T a = coefs[k];
    const T b_min = a > 0 ? lower[j] : upper[j];
    const T b_max = a > 0 ? upper[j] : lower[j];
    if (std::isinf(b_min))
      ++act.min_inf_count;
    else
      act.min_finite += a * b_min;
    if (std::isinf(b_max))
      ++act.max_inf_count;
    else
      act.max_finite += a * b_max;
  }
  return act;
}

template <typename T>
struct ResidualActivities {
  T min_res;
  T max_res;
};

/// Activities of the row with variable j's contribution removed. When the
/// row has exactly one infinite contribution and it comes from j, the
/// residual is the finite part of the sum; with two or more it stays
/// infinite no matter which variable is removed.
template <typename T>
ResidualActivities<T> residual_activities(const ActivityRecordT<T>& act, T a_j,
                                          T lower_j, T upper_j) {
  constexpr T inf = std::numeric_limits<T>::infinity();
  const T b_min = a_j > 0 ? lower_j : upper_j;
  const T b_max = a_j > 0 ? upper_j : lower_j;

  ResidualActivities<T> res{-inf, inf};
  if (act.min_inf_count == 0)
    res.min_res = act.min_finite - a_j * b_min;
  else if (act.min_inf_count == 1 && std::isinf(b_min))
    res.min_res = act.min_finite;
  if (act.max_inf_count == 0)
    res.max_res = act.max_finite - a_j * b_max;
  else if (act.max_inf_count == 1 && std::isinf(b_max))
    res.max_res = act.max_finite;
  return res;
}

/// New bound candidates for one variable from one constraint, in residual
/// form. A side whose numerator involves an infinity yields a non-binding
/// infinite candidate, as do candidates whose magnitude reaches the
/// infinity threshold. Integral variables get their candidates rounded
/// inward with a small protection epsilon.
template <typename T>
BoundCandidate<T> compute_bound_candidates(T a_j, T lhs, T rhs, T min_res,
                                           T max_res, bool var_integral,
                                           const EngineConfig& cfg) {
  constexpr T inf = std::numeric_limits<T>::infinity();
  const bool rhs_side = !std::isinf(rhs) && !std::isinf(min_res);
  const bool lhs_side = !std::isinf(lhs) && !std::isinf(max_res);

  BoundCandidate<T> cand;
  if (a_j > 0) {
    if (rhs_side) cand.new_upper = (rhs - min_res) / a_j;
    if (lhs_side) cand.new_lower = (lhs - max_res) / a_j;
  } else {
    if (rhs_side) cand.new_lower = (rhs - min_res) / a_j;
    if (lhs_side) cand.new_upper = (lhs - max_res) / a_j;
  }

  if (var_integral) {
    const T eps = static_cast<T>(cfg.integrality_eps);
    if (std::isfinite(cand.new_lower))
      cand.new_lower = std::ceil(cand.new_lower - eps);
    if (std::isfinite(cand.new_upper))
      cand.new_upper = std::floor(cand.new_upper + eps);
  }

  const T huge = static_cast<T>(cfg.infinity_threshold);
  if (!(cand.new_lower > -huge && cand.new_lower < huge))
    cand.new_lower = -inf;
  if (!(cand.new_upper > -huge && cand.new_upper < huge))
    cand.new_upper = inf;
  return cand;
}

/// Redundant when the activity range sits inside [lhs, rhs]; infeasible
/// when an effective activity violates a finite side by more than a small
/// slack guarding against round-off.
template <typename T>
RowStatus classify_constraint(const ActivityRecordT<T>& act, T lhs, T rhs,
                              const EngineConfig& cfg) {
  const double min_act = static_cast<double>(act.min_activity());
  const double max_act = static_cast<double>(act.max_activity());
  const double lhs_d = static_cast<double>(lhs);
  const double rhs_d = static_cast<double>(rhs);

  if (lhs_d <= min_act && max_act <= rhs_d) return RowStatus::Redundant;

  if (std::isfinite(rhs_d)) {
    const double slack =
        cfg.improvement_abs + cfg.improvement_rel * std::max(1.0, std::fabs(rhs_d));
    if (min_act > rhs_d + slack) return RowStatus::Infeasible;
  }
  if (std::isfinite(lhs_d)) {
    const double slack =
        cfg.improvement_abs + cfg.improvement_rel * std::max(1.0, std::fabs(lhs_d));
    if (lhs_d > max_act + slack) return RowStatus::Infeasible;
  }
  return RowStatus::Propagatable;
}

namespace detail {

// Acceptance comparisons run in 64-bit regardless of the engine's scalar
// mode. A candidate improves a finite bound only when it clears the
// configured step; any finite candidate replaces an infinite bound.
inline bool improves_lower(double old_lower, double cand, const EngineConfig& cfg) {
  if (std::isinf(cand)) return false;
  if (std::isinf(old_lower)) return true;
  const double step =
      cfg.improvement_abs + cfg.improvement_rel * std::max(1.0, std::fabs(old_lower));
  return cand > old_lower + step;
}

inline bool improves_upper(double old_upper, double cand, const EngineConfig& cfg) {
  if (std::isinf(cand)) return false;
  if (std::isinf(old_upper)) return true;
  const double step =
      cfg.improvement_abs + cfg.improvement_rel * std::max(1.0, std::fabs(old_upper));
  return cand < old_upper - step;
}

}  // namespace detail

/// Applies a candidate to the current bounds of its variable.
template <typename T>
TightenOutcome<T> tighten(T old_lower, T old_upper, const BoundCandidate<T>& cand,
                          const EngineConfig& cfg) {
  const bool take_lower = detail::improves_lower(static_cast<double>(old_lower),
                                                 static_cast<double>(cand.new_lower), cfg);
  const bool take_upper = detail::improves_upper(static_cast<double>(old_upper),
                                                 static_cast<double>(cand.new_upper), cfg);

  TightenOutcome<T> out;
  const double lower = static_cast<double>(take_lower ? cand.new_lower : old_lower);
  const double upper = static_cast<double>(take_upper ? cand.new_upper : old_upper);
  if ((take_lower || take_upper) && lower > upper + cfg.improvement_abs) {
    out.kind = TightenKind::EmptyDomain;
    return out;
  }
  if (take_lower && take_upper)
    out.kind = TightenKind::Both;
  else if (take_lower)
    out.kind = TightenKind::NewLower;
  else if (take_upper)
    out.kind = TightenKind::NewUpper;
  if (take_lower) out.new_lower = cand.new_lower;
  if (take_upper) out.new_upper = cand.new_upper;
  return out;
}

}  // namespace propgate

#endif  // PROPGATE_PROPCORE_HPP
