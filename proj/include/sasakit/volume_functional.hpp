#pragma once

#include "sasakit/toric_cone.hpp"

namespace sasakit {

/// Closed rational form of the volume functional on the Reeb cone interior:
///   V(x) = normalization * sum_T A_T / prod_{k in T} (2 <x, r_k>),
/// from the ray-fan triangulation of the moment cone.  The vertex set of
/// Delta_x is combinatorially constant on the interior, so this single
/// expression is smooth there and can be differentiated termwise.
struct VolumeModel {
  ConeModel cone;
  std::vector<std::vector<int>> simplex_rays;  // ray index tuples, size n
  VecQ coeff_exact;                            // A_T = |det rays| / n!
  VecD coeff;
  double normalization = 0;  // 2(m+1)(2pi)^(m+1)

  int simplex_count() const { return static_cast<int>(simplex_rays.size()); }
};

VolumeModel build_volume_model(const ConeModel& cone);

double vol(const VolumeModel& model, const VecD& xi);
VecD grad_vol(const VolumeModel& model, const VecD& xi);
MatD hess_vol(const VolumeModel& model, const VecD& xi);

double vol(const VolumeModel& model, const ReebVector& xi);
VecD grad_vol(const VolumeModel& model, const ReebVector& xi);
MatD hess_vol(const VolumeModel& model, const ReebVector& xi);

/// V evaluated without the interior check; +inf outside.  Line-search helper.
double vol_or_inf(const VolumeModel& model, const VecD& xi) noexcept;

/// The polytope Delta_x = {y in C(mu) : 2<x,y> <= 1}, realized explicitly.
PolytopeD delta_x_polytope(const ConeModel& cone, const VecD& xi);

}  // namespace sasakit
