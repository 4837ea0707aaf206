#ifndef PROPGATE_MPS_HPP
#define PROPGATE_MPS_HPP

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "propgate/model.hpp"

namespace propgate {

class MpsError : public std::runtime_error {
 public:
  MpsError(int line, const std::string& message)
      : std::runtime_error("mps parse error at line " + std::to_string(line) +
                           ": " + message),
        line_(line) {}

  int line() const { return line_; }

 private:
  int line_;
};

/// Reads a free-format MPS model. Constraints are normalized to
/// lhs <= a'x <= rhs; the objective row is accepted and discarded; values
/// with magnitude >= infinity_threshold become infinite.
ProblemInstance parse_mps(std::istream& in, double infinity_threshold = 1e20);

ProblemInstance parse_mps_file(const std::string& path,
                               double infinity_threshold = 1e20);

/// Writes the instance back as free MPS with generated row/column names
/// (r<i>, x<j>). Re-parsing the output reproduces the instance exactly,
/// except that the reconstructed side of a two-sided (RANGES) row can be
/// one ulp off when no range value reproduces it exactly.
void write_mps(const ProblemInstance& instance, std::ostream& out);

void write_mps_file(const ProblemInstance& instance, const std::string& path);

}  // namespace propgate

#endif  // PROPGATE_MPS_HPP
