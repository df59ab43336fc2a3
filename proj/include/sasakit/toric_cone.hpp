#pragma once

#include <optional>
#include <string>

#include "sasakit/polytope.hpp"
#include "sasakit/types.hpp"

namespace sasakit {

/// A toric diagram: the integer inward facet normals of the moment cone.
/// Construction validates primitivity, rank, pointedness and nonempty
/// interior; non-primitive rows are rejected, never rescaled.
struct ToricDiagram {
  std::string name;
  int n = 0;     // ambient dimension, m + 1
  MatZ normals;  // d x n, one normal per row

  int facet_count() const { return static_cast<int>(normals.rows()); }
};

ToricDiagram make_toric_diagram(std::string name, int n, MatZ normals);

/// Parse the JSON input document {"name":..., "dim":..., "normals":[[...]]}.
/// Unknown fields are rejected; integers must fit in signed 64 bits.
ToricDiagram parse_toric_diagram(const std::string& text);

/// Moment cone with both representations, the Gorenstein vector and the
/// facet/ray incidence.
struct ConeModel {
  ToricDiagram diagram;
  MatZ rays;          // n x r, primitive generators, lex sorted
  BoolMat incidence;  // facet x ray
  VecQ gamma;         // <lambda_j, gamma> = -1 for every j
  Integer gamma_ell;  // least l >= 1 with l*gamma integral
  VecZ l_infty;       // sum of the normals

  MatD normals_d;
  MatD rays_d;
  VecD gamma_d;
  VecD l_infty_d;

  int n() const { return diagram.n; }
  int facet_count() const { return diagram.facet_count(); }
  int ray_count() const { return static_cast<int>(rays.cols()); }
};

/// Extreme rays of {y : <lambda_j, y> >= 0}; exact double description.
MatZ dual_rays(const MatZ& normals);

/// Exact solve of the overdetermined system <lambda_j, gamma> = -1.
/// Throws GammaInconsistent when no solution exists (c1(D) != 0 signal).
VecQ gorenstein_gamma(const MatZ& normals, Integer* ell = nullptr);

ConeModel build_cone_model(const ToricDiagram& diagram);

/// A candidate Reeb vector with its feasibility flags.
struct ReebVector {
  VecD xi;
  std::optional<VecQ> xi_exact;  // set when the input was exact
  bool on_slice = false;         // <gamma, xi> = -(m+1)
  bool interior = false;         // <xi, r_k> > 0 for every ray
  double slice_residual = 0.0;   // <gamma, xi> + (m+1)
  int violated_ray = -1;         // witness when !interior

  bool feasible() const { return on_slice && interior; }
};

/// Evaluate both feasibility flags; never throws.  The slice test uses a
/// 1e-12 absolute tolerance for binary64 input and exact equality for
/// rational input.
ReebVector check_reeb(const ConeModel& model, const VecD& xi);
ReebVector check_reeb(const ConeModel& model, const VecQ& xi);

/// As check_reeb, but throws NotOnSlice / NotInterior naming the slice
/// residual or the violated ray.
ReebVector reeb_feasible(const ConeModel& model, const VecD& xi);
ReebVector reeb_feasible(const ConeModel& model, const VecQ& xi);
void require_feasible(const ReebVector& xi);

/// The characteristic polytope {alpha in C(mu) : alpha(xi) = 1} realized in
/// an (n-1)-dimensional affine chart (the coordinate with the largest |xi_i|
/// is eliminated).  Vertices are r_k / <xi, r_k>.
PolytopeD characteristic_polytope(const ConeModel& model, const ReebVector& xi);

}  // namespace sasakit
