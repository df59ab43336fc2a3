#pragma once

#include "sasakit/types.hpp"

namespace sasakit {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Rational value;
  VecQ x;
};

/// Exact rational simplex (two-phase, Bland's rule):
///   minimize c.x  subject to  A x >= b,  x free.
LpResult solve_lp(const MatQ& a, const VecQ& b, const VecQ& c);

/// Feasibility of {x : A x >= b}.
bool lp_feasible(const MatQ& a, const VecQ& b);

}  // namespace sasakit
