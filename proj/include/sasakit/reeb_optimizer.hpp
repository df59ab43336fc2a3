#pragma once

#include "sasakit/volume_functional.hpp"

namespace sasakit {

struct RegularityTag {
  enum Kind { RationalReeb, IrregularNumeric };
  Kind kind = IrregularNumeric;
  // Per-coordinate certificate p/q when kind == RationalReeb.
  std::vector<std::pair<Integer, Integer>> certificate;
};

struct TracePoint {
  VecD x;
  double value = 0;
  double grad_norm = 0;
};

struct MinimizeResult {
  VecD x_c;
  double value = 0;
  double slice_grad_norm = 0;
  int iterations = 0;
  bool converged = false;
  std::string diagnostic;
  RegularityTag regularity;
  std::vector<TracePoint> trace;
};

/// Canonical starting point: the slice rescaling of sum_j lambda_j, which is
/// interior to the dual cone because the lambda_j generate it.
ReebVector initial_point(const ConeModel& cone);

/// Projected Newton on the affine slice {<gamma, x> = -(m+1)}: the problem is
/// reduced to an integer basis of ker(gamma), with Armijo backtracking and
/// rejection of trial points that leave the Reeb cone interior.
MinimizeResult minimize(const VolumeModel& model, const ReebVector& x0, double tol = 1e-10,
                        int max_iter = 200);

/// Continued-fraction rational reconstruction per coordinate.
/// Regular-vs-quasi-regular discrimination is not attempted.
RegularityTag classify_regularity(const VecD& x_c, const Integer& denom_bound = Integer(1000000),
                                  double tol = 1e-9);

/// Integer basis of the slice tangent space ker(gamma).
MatZ slice_basis(const ConeModel& cone);

}  // namespace sasakit
