#pragma once

#include <limits>
#include <vector>

#include "p2pmarket/common.hpp"

namespace p2pm {

enum class RowKind { LessEqual, Equal, GreaterEqual };
enum class LpSense { Maximize, Minimize };
enum class LpStatus { Optimal, Infeasible, Unbounded, Stalled };

const char* to_string(LpStatus status);

// Dense LP in row form. Variables are continuous with bounds
// [lower, upper]; lower bounds must be >= 0 and upper bounds may be
// +infinity. Empty bound vectors mean all-zero lowers / all-infinite
// uppers.
struct LinearProgram {
  static constexpr double kInfinity = std::numeric_limits<double>::infinity();

  LpSense sense = LpSense::Maximize;
  std::vector<double> objective;
  std::vector<std::vector<double>> constraint_matrix;  // one inner vector per row
  std::vector<double> rhs;
  std::vector<RowKind> row_kinds;
  std::vector<double> lower_bounds;
  std::vector<double> upper_bounds;
};

struct LpSolution {
  LpStatus status = LpStatus::Stalled;
  std::vector<double> primal_values;
  double objective_value = 0.0;
};

// Two-phase dense tableau simplex with Bland's rule, so runs are
// cycle-free and deterministic for identical input. Optimal solutions
// are re-checked against every constraint and bound before being
// returned; a failed audit throws InternalError rather than reporting
// optimal. Malformed programs throw ValidationError. Exhausting the
// iteration cap (50 x (rows + columns)) yields status Stalled.
LpSolution solve(const LinearProgram& lp);

}  // namespace p2pm
