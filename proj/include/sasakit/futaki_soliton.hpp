#pragma once

#include "sasakit/volume_functional.hpp"

namespace sasakit {

/// The m-dimensional characteristic polytope in ker(gamma) coordinates:
/// facet functionals l'_i(v) = <lambda'_i, v> + 1/(m+1), where
/// lambda_i = B lambda'_i + xi/(m+1).
struct SigmaModel {
  MatZ basis;          // n x m integer basis B of ker(gamma)
  MatD basis_d;
  MatD lambda_primed;  // m x d, column i holds lambda'_i
  double offset = 0;   // 1/(m+1)
  PolytopeD sigma;
  VecD xi;
  MatD normals;  // copy of the cone normals, for consistency checks

  int m() const { return static_cast<int>(basis.cols()); }
};

SigmaModel build_sigma(const ConeModel& cone, const ReebVector& xi);
SigmaModel build_sigma(const ConeModel& cone, const ReebVector& xi, const MatZ& basis);

enum class FutakiVerdict { Obstructed, UnobstructedAtTolerance };

/// Both toric realizations of the obstruction f_1: the slice-projected
/// volume gradient and the barycenter of Sigma-bar.  The paper leaves the
/// constant between them convention-dependent, so both are reported and
/// only simultaneous vanishing is asserted; the fitted ratio is recorded.
struct FutakiReport {
  VecD projected_grad;  // B^T grad V(xi)
  double grad_norm = 0;
  VecD sigma_barycenter;
  double barycenter_norm = 0;
  FutakiVerdict verdict = FutakiVerdict::Obstructed;
  double tol = 0;
  double fitted_ratio = 0;           // least-squares barycenter ~ ratio * grad
  double collinearity_residual = 0;  // relative residual of that fit
};

FutakiReport futaki_report(const VolumeModel& volmodel, const SigmaModel& sigma,
                           const ReebVector& xi, double tol = 1e-7);

/// Tian-Zhu soliton coefficients: the unique root of the weighted-barycenter
/// map c -> int_Sigma v e^{<c,v>} dv, found by Newton on log int e^{<c,v>}.
struct SolitonResult {
  VecD c;
  double residual = 0;  // |int v e^{<c,v>}| / int e^{<c,v>}
  int iterations = 0;
  VecD c_ambient;  // B c
  std::vector<double> residual_trace;
};

SolitonResult soliton_vector(const SigmaModel& sigma, double tol = 1e-10, int max_iter = 100);

}  // namespace sasakit
