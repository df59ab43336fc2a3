#pragma once

#include "sasakit/types.hpp"

namespace sasakit {

int rank_q(MatQ a);

Rational det_q(MatQ a);

/// Exact solution of a (possibly overdetermined) system A x = b with
/// rank(A) == cols(A).  `consistent` is false when some row is violated.
struct LinSolveQ {
  bool consistent = false;
  VecQ x;
};
LinSolveQ solve_exact(const MatQ& a, const VecQ& b);

/// Columns form a basis of {x : A x = 0}.
MatQ nullspace_q(const MatQ& a);

/// Integer basis of the kernel of a nonzero primitive integer row vector g,
/// obtained from an extended-gcd column sweep (unimodular, deterministic).
/// Returns an n x (n-1) matrix whose columns span ker(g) over Z.
MatZ integer_kernel_basis(const VecZ& g);

}  // namespace sasakit
