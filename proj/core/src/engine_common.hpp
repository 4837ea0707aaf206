#ifndef PROPGATE_SRC_ENGINE_COMMON_HPP
#define PROPGATE_SRC_ENGINE_COMMON_HPP

#include <cmath>
#include <vector>

#include "propgate/model.hpp"

namespace propgate::detail {

// Engine-local copy of the numeric data in the configured scalar type,
// with magnitudes at or above the infinity threshold normalized to
// IEEE infinities.
template <typename T>
struct WorkingProblem {
  std::vector<T> values;
  std::vector<T> lhs;
  std::vector<T> rhs;
  std::vector<T> lower;
  std::vector<T> upper;
};

template <typename T>
WorkingProblem<T> make_working_problem(const ProblemInstance& instance,
                                       double infinity_threshold) {
  auto convert = [&](const std::vector<double>& src, std::vector<T>& dst) {
    dst.resize(src.size());
    for (size_t i = 0; i < src.size(); ++i)
      dst[i] = static_cast<T>(normalize_infinite(src[i], infinity_threshold));
  };
  WorkingProblem<T> w;
  w.values.assign(instance.matrix.values.begin(), instance.matrix.values.end());
  convert(instance.lhs, w.lhs);
  convert(instance.rhs, w.rhs);
  convert(instance.bounds.lower, w.lower);
  convert(instance.bounds.upper, w.upper);
  return w;
}

template <typename T>
VariableBounds widen_bounds(const std::vector<T>& lower,
                            const std::vector<T>& upper) {
  VariableBounds b;
  b.lower.assign(lower.begin(), lower.end());
  b.upper.assign(upper.begin(), upper.end());
  return b;
}

// Input bounds that already cross signal infeasibility before any round.
template <typename T>
bool bounds_crossed(const std::vector<T>& lower, const std::vector<T>& upper,
                    double slack) {
  for (size_t j = 0; j < lower.size(); ++j) {
    if (static_cast<double>(lower[j]) > static_cast<double>(upper[j]) + slack)
      return true;
  }
  return false;
}

}  // namespace propgate::detail

#endif  // PROPGATE_SRC_ENGINE_COMMON_HPP
