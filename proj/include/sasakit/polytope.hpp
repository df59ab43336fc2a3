#pragma once

#include <vector>

#include "sasakit/types.hpp"

namespace sasakit {

/// Extreme rays of the pointed cone {y : H_j . y >= 0} (rows of `halfspaces`
/// are the inward normals).  Incremental double description with the
/// algebraic adjacency test; all decisions exact.  Output columns are
/// primitive integer generators in ascending lexicographic order.
MatZ cone_extreme_rays(const MatQ& halfspaces);

/// Bounded convex polytope {v : a_i . v + b_i >= 0} with explicit vertices.
/// Scalar is Rational (exact) or double; combinatorics (vertex set, incidence,
/// triangulation) are computed exactly in Q in both modes.
template <typename Scalar>
struct Polytope {
  int dim = 0;
  Mat<Scalar> vertices;       // dim x V, columns sorted lexicographically
  Mat<Scalar> facet_normals;  // F x dim
  Vec<Scalar> facet_offsets;  // F
  BoolMat incidence;          // F x V
  std::vector<std::vector<int>> simplices;  // vertex index tuples, size dim+1

  int vertex_count() const { return static_cast<int>(vertices.cols()); }
  int facet_count() const { return static_cast<int>(facet_normals.rows()); }
  bool triangulated() const { return !simplices.empty(); }
};

using PolytopeQ = Polytope<Rational>;
using PolytopeD = Polytope<double>;

/// Vertex enumeration of a bounded full-dimensional H-rep.
/// Throws Unbounded when the recession cone is nontrivial and
/// LowerDimensional when the vertex set is empty or not full-dimensional.
template <typename Scalar>
Polytope<Scalar> vertex_enumeration(const Mat<Scalar>& normals, const Vec<Scalar>& offsets);

/// Fan triangulation from the lexicographically least vertex.  Supports
/// intrinsic dimension <= 3.
template <typename Scalar>
void triangulate(Polytope<Scalar>& p);

template <typename Scalar>
Scalar volume(const Polytope<Scalar>& p);

/// Divergence-theorem volume, used as an independent cross-check of the
/// triangulation-based volume.
double boundary_volume(const PolytopeD& p);

VecD polytope_barycenter(const PolytopeD& p);

struct ExpMoments {
  double i0 = 0;  // integral of exp(c.v)
  VecD i1;        // integral of v exp(c.v)
  MatD i2;        // integral of v v^T exp(c.v)
};

enum class ExpMode {
  Auto,               // divided differences, series fallback on clustered nodes
  DividedDifference,  // series only for exactly repeated nodes
  Series,             // series on every block
};

/// Exponential moments over a triangulated polytope via divided differences
/// of exp over the per-simplex vertex values of c.v.  Fixed accumulation
/// order with compensated summation; bit-identical regardless of threading.
ExpMoments exp_moments(const PolytopeD& p, const VecD& c, ExpMode mode = ExpMode::Auto);

namespace detail {
/// Divided difference of exp over a node multiset.
double exp_divided_difference(std::vector<double> nodes, ExpMode mode = ExpMode::Auto);
}  // namespace detail

}  // namespace sasakit
