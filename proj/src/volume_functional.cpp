#include "sasakit/volume_functional.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "sasakit/exact_linalg.hpp"
#include "sasakit/rational.hpp"

namespace sasakit {

namespace {

// Cross-section polytope {y in C : <w, y> = 1} in the chart dropping the
// first coordinate where w is nonzero, together with the ray index of each
// chart vertex.
struct CrossSection {
  PolytopeQ polytope;
  std::vector<int> ray_of_vertex;
};

CrossSection cross_section(const ConeModel& cone, const VecQ& w) {
  const int n = cone.n();
  int drop = 0;
  while (drop < n && w(drop) == 0) ++drop;
  if (drop == n) fail(Errc::MalformedInput, "zero slicing vector");

  const int d = cone.facet_count();
  MatQ a(d, n - 1);
  VecQ b(d);
  for (int i = 0; i < d; ++i) {
    const Rational lead = Rational(cone.diagram.normals(i, drop)) / w(drop);
    b(i) = lead;
    int col = 0;
    for (int j = 0; j < n; ++j) {
      if (j == drop) continue;
      a(i, col++) = Rational(cone.diagram.normals(i, j)) - lead * w(j);
    }
  }
  CrossSection out;
  out.polytope = vertex_enumeration<Rational>(a, b);

  // Match each chart vertex back to its ray.
  out.ray_of_vertex.resize(out.polytope.vertex_count(), -1);
  for (int v = 0; v < out.polytope.vertex_count(); ++v) {
    VecQ y(n);
    Rational rest = 0;
    int col = 0;
    for (int j = 0; j < n; ++j) {
      if (j == drop) continue;
      y(j) = out.polytope.vertices(col, v);
      rest += w(j) * y(j);
      ++col;
    }
    y(drop) = (1 - rest) / w(drop);
    VecZ prim = primitive_ray(y);
    for (int k = 0; k < cone.ray_count(); ++k) {
      if (cone.rays.col(k) == prim) {
        out.ray_of_vertex[v] = k;
        break;
      }
    }
    if (out.ray_of_vertex[v] < 0)
      fail(Errc::MalformedInput, "internal: cross-section vertex is not on a cone ray");
  }
  return out;
}

}  // namespace

VolumeModel build_volume_model(const ConeModel& cone) {
  VolumeModel m;
  m.cone = cone;
  const int n = cone.n();
  m.normalization = 2.0 * n * std::pow(2.0 * std::numbers::pi, n);

  CrossSection cs = cross_section(cone, to_rational(cone.l_infty));
  triangulate(cs.polytope);

  m.coeff_exact.resize(static_cast<int>(cs.polytope.simplices.size()));
  int t = 0;
  for (const auto& simplex : cs.polytope.simplices) {
    std::vector<int> rays;
    for (int v : simplex) rays.push_back(cs.ray_of_vertex[v]);
    std::sort(rays.begin(), rays.end());
    MatQ mat(n, n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) mat(i, j) = Rational(cone.rays(i, rays[j]));
    Rational a = abs(det_q(mat));
    for (int k = 2; k <= n; ++k) a /= k;
    if (a == 0) fail(Errc::MalformedInput, "internal: degenerate ray simplex");
    m.coeff_exact(t++) = a;
    m.simplex_rays.push_back(std::move(rays));
  }
  m.coeff = to_double(m.coeff_exact);
  return m;
}

namespace {

double min_ray_pairing(const VolumeModel& model, const VecD& xi) {
  double lo = std::numeric_limits<double>::infinity();
  for (int k = 0; k < model.cone.ray_count(); ++k)
    lo = std::min(lo, xi.dot(model.cone.rays_d.col(k)));
  return lo;
}

void require_interior(const VolumeModel& model, const VecD& xi) {
  if (!(min_ray_pairing(model, xi) > 0))
    fail(Errc::NotInterior, "volume functional evaluated outside the Reeb cone interior");
}

}  // namespace

double vol(const VolumeModel& model, const VecD& xi) {
  require_interior(model, xi);
  double sum = 0;
  for (int t = 0; t < model.simplex_count(); ++t) {
    double denom = 1;
    for (int k : model.simplex_rays[t]) denom *= 2.0 * xi.dot(model.cone.rays_d.col(k));
    sum += model.coeff(t) / denom;
  }
  return model.normalization * sum;
}

double vol_or_inf(const VolumeModel& model, const VecD& xi) noexcept {
  if (!(min_ray_pairing(model, xi) > 0)) return std::numeric_limits<double>::infinity();
  double sum = 0;
  for (int t = 0; t < model.simplex_count(); ++t) {
    double denom = 1;
    for (int k : model.simplex_rays[t]) denom *= 2.0 * xi.dot(model.cone.rays_d.col(k));
    sum += model.coeff(t) / denom;
  }
  return model.normalization * sum;
}

VecD grad_vol(const VolumeModel& model, const VecD& xi) {
  require_interior(model, xi);
  const int n = model.cone.n();
  VecD grad = VecD::Zero(n);
  for (int t = 0; t < model.simplex_count(); ++t) {
    double denom = 1;
    for (int k : model.simplex_rays[t]) denom *= 2.0 * xi.dot(model.cone.rays_d.col(k));
    const double term = model.coeff(t) / denom;
    for (int k : model.simplex_rays[t])
      grad -= term / xi.dot(model.cone.rays_d.col(k)) * model.cone.rays_d.col(k);
  }
  return model.normalization * grad;
}

MatD hess_vol(const VolumeModel& model, const VecD& xi) {
  require_interior(model, xi);
  const int n = model.cone.n();
  MatD hess = MatD::Zero(n, n);
  VecD dir(n);
  for (int t = 0; t < model.simplex_count(); ++t) {
    double denom = 1;
    for (int k : model.simplex_rays[t]) denom *= 2.0 * xi.dot(model.cone.rays_d.col(k));
    const double term = model.coeff(t) / denom;
    dir.setZero();
    for (int k : model.simplex_rays[t]) {
      const double s = xi.dot(model.cone.rays_d.col(k));
      dir += model.cone.rays_d.col(k) / s;
      hess += term / (s * s) * model.cone.rays_d.col(k) * model.cone.rays_d.col(k).transpose();
    }
    hess += term * dir * dir.transpose();
  }
  return model.normalization * hess;
}

double vol(const VolumeModel& model, const ReebVector& xi) {
  require_feasible(xi);
  return vol(model, xi.xi);
}

VecD grad_vol(const VolumeModel& model, const ReebVector& xi) {
  require_feasible(xi);
  return grad_vol(model, xi.xi);
}

MatD hess_vol(const VolumeModel& model, const ReebVector& xi) {
  require_feasible(xi);
  return hess_vol(model, xi.xi);
}

PolytopeD delta_x_polytope(const ConeModel& cone, const VecD& xi) {
  const int n = cone.n();
  const int d = cone.facet_count();
  MatD a(d + 1, n);
  VecD b(d + 1);
  a.topRows(d) = cone.normals_d;
  b.head(d).setZero();
  a.row(d) = -2.0 * xi.transpose();
  b(d) = 1.0;
  PolytopeD p = vertex_enumeration<double>(a, b);
  if (n <= 3) triangulate(p);
  return p;
}

}  // namespace sasakit
