#include "sasakit/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include "sasakit/exact_linalg.hpp"
#include "sasakit/rational.hpp"

namespace sasakit {

namespace {

Rational dot_qz(const MatQ& rows, int r, const VecZ& v) {
  Rational s = 0;
  for (Eigen::Index j = 0; j < v.size(); ++j) s += rows(r, j) * Rational(v(j));
  return s;
}

bool lex_less(const VecZ& a, const VecZ& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) != b(i)) return a(i) < b(i);
  }
  return false;
}

bool lex_less_q(const VecQ& a, const VecQ& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) != b(i)) return a(i) < b(i);
  }
  return false;
}

// Tight rows (among `rows` restricted to `active`) shared by two rays.
std::vector<int> common_tight(const MatQ& rows, const std::vector<int>& active, const VecZ& r1,
                              const VecZ& r2) {
  std::vector<int> out;
  for (int i : active) {
    if (dot_qz(rows, i, r1) == 0 && dot_qz(rows, i, r2) == 0) out.push_back(i);
  }
  return out;
}

int rank_of_rows(const MatQ& rows, const std::vector<int>& idx) {
  if (idx.empty()) return 0;
  MatQ sub(static_cast<int>(idx.size()), rows.cols());
  for (size_t k = 0; k < idx.size(); ++k) sub.row(static_cast<int>(k)) = rows.row(idx[k]);
  return rank_q(sub);
}

}  // namespace

MatZ cone_extreme_rays(const MatQ& halfspaces) {
  const int n = static_cast<int>(halfspaces.cols());
  const int d = static_cast<int>(halfspaces.rows());
  if (rank_q(halfspaces) != n)
    fail(Errc::RankDeficient, "cone halfspace normals do not span the ambient space");

  // Greedy initial independent subset, in row order.
  std::vector<int> init;
  {
    MatQ acc(0, n);
    for (int r = 0; r < d && static_cast<int>(init.size()) < n; ++r) {
      MatQ trial(acc.rows() + 1, n);
      trial.topRows(acc.rows()) = acc;
      trial.row(acc.rows()) = halfspaces.row(r);
      if (rank_q(trial) > acc.rows()) {
        acc = trial;
        init.push_back(r);
      }
    }
  }

  // Rays of the initial simplicial cone: <u_j, g_k> = delta_jk.
  std::vector<VecZ> rays;
  {
    MatQ u(n, n);
    for (int k = 0; k < n; ++k) u.row(k) = halfspaces.row(init[k]);
    for (int k = 0; k < n; ++k) {
      VecQ e = VecQ::Zero(n);
      e(k) = 1;
      LinSolveQ sol = solve_exact(u, e);
      rays.push_back(primitive_ray(sol.x));
    }
  }

  std::vector<int> inserted = init;
  for (int r = 0; r < d; ++r) {
    if (std::find(init.begin(), init.end(), r) != init.end()) continue;
    std::vector<int> plus, zero, minus;
    std::vector<Rational> s(rays.size());
    for (size_t k = 0; k < rays.size(); ++k) {
      s[k] = dot_qz(halfspaces, r, rays[k]);
      if (s[k] > 0) plus.push_back(static_cast<int>(k));
      else if (s[k] == 0) zero.push_back(static_cast<int>(k));
      else minus.push_back(static_cast<int>(k));
    }
    if (minus.empty()) {
      inserted.push_back(r);
      continue;
    }
    std::vector<VecZ> next;
    for (int k : plus) next.push_back(rays[k]);
    for (int k : zero) next.push_back(rays[k]);
    for (int p : plus) {
      for (int m : minus) {
        std::vector<int> tight = common_tight(halfspaces, inserted, rays[p], rays[m]);
        if (rank_of_rows(halfspaces, tight) != n - 2) continue;
        VecQ w(n);
        for (int j = 0; j < n; ++j)
          w(j) = s[p] * Rational(rays[m](j)) - s[m] * Rational(rays[p](j));
        next.push_back(primitive_ray(w));
      }
    }
    std::sort(next.begin(), next.end(), lex_less);
    next.erase(std::unique(next.begin(), next.end(),
                           [](const VecZ& a, const VecZ& b) { return a == b; }),
               next.end());
    rays = next;
    inserted.push_back(r);
  }

  std::sort(rays.begin(), rays.end(), lex_less);
  MatZ out(n, static_cast<int>(rays.size()));
  for (size_t k = 0; k < rays.size(); ++k) out.col(static_cast<int>(k)) = rays[k];
  return out;
}

namespace {

MatQ to_exact(const MatD& a) { return rationalize(a); }
const MatQ& to_exact(const MatQ& a) { return a; }
VecQ to_exact_vec(const VecD& v) { return rationalize(v); }
const VecQ& to_exact_vec(const VecQ& v) { return v; }

double cast_scalar(const Rational& q, double) { return to_double(q); }
Rational cast_scalar(const Rational& q, Rational) { return q; }

}  // namespace

template <typename Scalar>
Polytope<Scalar> vertex_enumeration(const Mat<Scalar>& normals, const Vec<Scalar>& offsets) {
  if (normals.rows() != offsets.size())
    fail(Errc::MalformedInput, "facet normal/offset count mismatch");
  const MatQ a = to_exact(normals);
  const VecQ b = to_exact_vec(offsets);
  const int m = static_cast<int>(a.cols());
  const int f = static_cast<int>(a.rows());

  if (rank_q(a) < m)
    fail(Errc::Unbounded, "facet normals do not span: the H-rep has a recession direction");

  // Homogenize: rows (a_i | b_i) plus (0 | 1); vertices are rays with t > 0.
  MatQ h(f + 1, m + 1);
  h.topLeftCorner(f, m) = a;
  h.col(m).head(f) = b;
  h.row(f).setZero();
  h(f, m) = 1;

  MatZ rays = cone_extreme_rays(h);
  std::vector<VecQ> verts;
  for (int k = 0; k < rays.cols(); ++k) {
    Integer t = rays(m, k);
    if (t == 0) {
      fail(Errc::Unbounded, "unbounded H-rep: recession ray found");
    }
    VecQ v(m);
    for (int j = 0; j < m; ++j) v(j) = Rational(rays(j, k), t);
    verts.push_back(v);
  }
  if (verts.empty()) fail(Errc::LowerDimensional, "H-rep has no vertices (empty input region)");

  std::sort(verts.begin(), verts.end(), lex_less_q);

  // Full-dimensionality of the vertex set.
  {
    MatQ diff(static_cast<int>(verts.size()) - 1, m);
    for (size_t k = 1; k < verts.size(); ++k)
      diff.row(static_cast<int>(k - 1)) = (verts[k] - verts[0]).transpose();
    if (verts.size() < static_cast<size_t>(m) + 1 || rank_q(diff) < m)
      fail(Errc::LowerDimensional, "H-rep is not full-dimensional");
  }

  Polytope<Scalar> p;
  p.dim = m;
  p.facet_normals = normals;
  p.facet_offsets = offsets;
  p.vertices.resize(m, static_cast<int>(verts.size()));
  p.incidence.resize(f, static_cast<int>(verts.size()));
  for (size_t k = 0; k < verts.size(); ++k) {
    for (int j = 0; j < m; ++j)
      p.vertices(j, static_cast<int>(k)) = cast_scalar(verts[k](j), Scalar{});
    for (int i = 0; i < f; ++i) {
      Rational val = b(i);
      for (int j = 0; j < m; ++j) val += a(i, j) * verts[k](j);
      p.incidence(i, static_cast<int>(k)) = (val == 0);
    }
  }
  return p;
}

template Polytope<Rational> vertex_enumeration<Rational>(const MatQ&, const VecQ&);
template Polytope<double> vertex_enumeration<double>(const MatD&, const VecD&);

namespace {

// Cyclic order of the vertices of a planar convex polygon in R^3 (exact).
std::vector<int> polygon_cycle(const MatQ& verts, const std::vector<int>& face) {
  const int k = static_cast<int>(face.size());
  VecQ centroid = VecQ::Zero(3);
  for (int idx : face) centroid += verts.col(idx);
  centroid /= Rational(k);

  // Plane normal from two independent edge vectors.
  VecQ u = verts.col(face[1]) - verts.col(face[0]);
  VecQ normal = VecQ::Zero(3);
  for (int j = 2; j < k; ++j) {
    VecQ v = verts.col(face[j]) - verts.col(face[0]);
    normal(0) = u(1) * v(2) - u(2) * v(1);
    normal(1) = u(2) * v(0) - u(0) * v(2);
    normal(2) = u(0) * v(1) - u(1) * v(0);
    if (normal(0) != 0 || normal(1) != 0 || normal(2) != 0) break;
  }
  int drop = 0;
  while (drop < 3 && normal(drop) == 0) ++drop;
  const int c0 = (drop == 0) ? 1 : 0;
  const int c1 = (drop == 2) ? 1 : 2;

  struct Planar {
    int idx;
    Rational x, y;
  };
  std::vector<Planar> pts;
  for (int idx : face)
    pts.push_back({idx, verts(c0, idx) - centroid(c0), verts(c1, idx) - centroid(c1)});

  auto half = [](const Planar& p) { return (p.y < 0 || (p.y == 0 && p.x < 0)) ? 1 : 0; };
  std::sort(pts.begin(), pts.end(), [&](const Planar& p, const Planar& q) {
    int hp = half(p), hq = half(q);
    if (hp != hq) return hp < hq;
    Rational cross = p.x * q.y - p.y * q.x;
    if (cross != 0) return cross > 0;
    return p.idx < q.idx;
  });

  // Rotate so the cycle starts at the smallest vertex index.
  int start = 0;
  for (int i = 1; i < k; ++i) {
    if (pts[i].idx < pts[start].idx) start = i;
  }
  std::vector<int> cycle;
  for (int i = 0; i < k; ++i) cycle.push_back(pts[(start + i) % k].idx);
  return cycle;
}

}  // namespace

template <typename Scalar>
void triangulate(Polytope<Scalar>& p) {
  const int m = p.dim;
  const int nv = p.vertex_count();
  p.simplices.clear();
  if (m < 1 || m > 3)
    fail(Errc::MalformedInput, "triangulation supported for intrinsic dimension 1..3");
  if (nv == m + 1) {
    std::vector<int> all(nv);
    for (int i = 0; i < nv; ++i) all[i] = i;
    p.simplices.push_back(all);
    return;
  }

  MatQ vq;
  if constexpr (std::is_same_v<Scalar, Rational>) vq = p.vertices;
  else vq = rationalize(p.vertices);

  // Faces not containing the apex (vertex 0, the lex-least one).
  std::set<std::vector<int>> faces;
  for (int fct = 0; fct < p.facet_count(); ++fct) {
    if (p.incidence(fct, 0)) continue;
    std::vector<int> face;
    for (int v = 0; v < nv; ++v) {
      if (p.incidence(fct, v)) face.push_back(v);
    }
    if (static_cast<int>(face.size()) < m) continue;  // redundant facet
    faces.insert(face);
  }

  std::set<std::vector<int>> out;
  for (const auto& face : faces) {
    if (m == 2) {
      std::vector<int> tri = {0, face[0], face[1]};
      std::sort(tri.begin(), tri.end());
      out.insert(tri);
    } else {  // m == 3
      std::vector<int> cycle = polygon_cycle(vq, face);
      for (size_t i = 1; i + 1 < cycle.size(); ++i) {
        std::vector<int> tet = {0, cycle[0], cycle[i], cycle[i + 1]};
        std::sort(tet.begin(), tet.end());
        out.insert(tet);
      }
    }
  }
  p.simplices.assign(out.begin(), out.end());
  if (p.simplices.empty()) fail(Errc::LowerDimensional, "triangulation found no full simplices");
}

template void triangulate<Rational>(PolytopeQ&);
template void triangulate<double>(PolytopeD&);

namespace {

Rational abs_det(MatQ m) { return abs(det_q(std::move(m))); }
double abs_det(const MatD& m) { return std::abs(m.determinant()); }

template <typename Scalar>
Scalar factorial_s(int k) {
  Scalar f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

template <typename Scalar>
Scalar volume(const Polytope<Scalar>& p) {
  if (!p.triangulated()) fail(Errc::MalformedInput, "volume requires a triangulation");
  const int m = p.dim;
  Scalar total = 0;
  Mat<Scalar> edges(m, m);
  for (const auto& simplex : p.simplices) {
    for (int j = 0; j < m; ++j)
      edges.col(j) = p.vertices.col(simplex[j + 1]) - p.vertices.col(simplex[0]);
    total += abs_det(edges);
  }
  return total / factorial_s<Scalar>(m);
}

template Rational volume<Rational>(const PolytopeQ&);
template double volume<double>(const PolytopeD&);

double boundary_volume(const PolytopeD& p) {
  const int m = p.dim;
  const int nv = p.vertex_count();
  MatQ vq = rationalize(p.vertices);
  double total = 0;
  std::set<std::vector<Rational>> seen;  // dedup coincident facet rows
  for (int fct = 0; fct < p.facet_count(); ++fct) {
    VecQ row(m + 1);
    for (int j = 0; j < m; ++j) row(j) = rational_from_double(p.facet_normals(fct, j));
    row(m) = rational_from_double(p.facet_offsets(fct));
    VecZ key = primitive_line(row);
    std::vector<Rational> keyv(key.size());
    for (Eigen::Index i = 0; i < key.size(); ++i) keyv[i] = Rational(key(i));
    if (!seen.insert(keyv).second) continue;

    std::vector<int> face;
    for (int v = 0; v < nv; ++v) {
      if (p.incidence(fct, v)) face.push_back(v);
    }
    if (static_cast<int>(face.size()) < m) continue;  // no (m-1)-measure

    double norm = p.facet_normals.row(fct).norm();
    double measure = 0;
    if (m == 1) {
      measure = 1.0;
    } else if (m == 2) {
      measure = (p.vertices.col(face[1]) - p.vertices.col(face[0])).norm();
    } else {
      std::vector<int> cycle = polygon_cycle(vq, face);
      Eigen::Vector3d w0 = p.vertices.col(cycle[0]);
      for (size_t i = 1; i + 1 < cycle.size(); ++i) {
        Eigen::Vector3d e1 = Eigen::Vector3d(p.vertices.col(cycle[i])) - w0;
        Eigen::Vector3d e2 = Eigen::Vector3d(p.vertices.col(cycle[i + 1])) - w0;
        measure += 0.5 * e1.cross(e2).norm();
      }
    }
    total += p.facet_offsets(fct) / norm * measure;
  }
  return total / m;
}

VecD polytope_barycenter(const PolytopeD& p) {
  if (!p.triangulated()) fail(Errc::MalformedInput, "barycenter requires a triangulation");
  const int m = p.dim;
  VecD acc = VecD::Zero(m);
  double vol = 0;
  MatD edges(m, m);
  for (const auto& simplex : p.simplices) {
    for (int j = 0; j < m; ++j)
      edges.col(j) = p.vertices.col(simplex[j + 1]) - p.vertices.col(simplex[0]);
    double w = abs_det(edges);
    VecD centroid = VecD::Zero(m);
    for (int idx : simplex) centroid += p.vertices.col(idx);
    centroid /= (m + 1);
    acc += w * centroid;
    vol += w;
  }
  return acc / vol;
}

namespace {

constexpr int kSeriesOrder = 12;

double factorial_d(int k) {
  double f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// exp[x_i..x_j] for clustered nodes: center at the mean and sum complete
// homogeneous symmetric terms, exp[d_0..d_k] = sum_t h_t(d) / (k+t)!.
double series_block(const std::vector<double>& nodes, int i, int j) {
  const int count = j - i + 1;
  double mu = 0;
  for (int t = i; t <= j; ++t) mu += nodes[t];
  mu /= count;
  double h[kSeriesOrder + 1] = {1.0};
  for (int t = i; t <= j; ++t) {
    const double d = nodes[t] - mu;
    for (int s = 1; s <= kSeriesOrder; ++s) h[s] += d * h[s - 1];
  }
  double sum = 0;
  for (int s = kSeriesOrder; s >= 0; --s) sum += h[s] / factorial_d(count - 1 + s);
  return std::exp(mu) * sum;
}

}  // namespace

double detail::exp_divided_difference(std::vector<double> nodes, ExpMode mode) {
  std::sort(nodes.begin(), nodes.end());
  const int n = static_cast<int>(nodes.size());
  double scale = 1;
  for (double x : nodes) scale = std::max(scale, std::abs(x));
  double thresh;
  switch (mode) {
    case ExpMode::Auto: thresh = 1e-6 * scale; break;
    case ExpMode::DividedDifference: thresh = 0.0; break;
    case ExpMode::Series: thresh = std::numeric_limits<double>::infinity(); break;
    default: thresh = 1e-6 * scale;
  }

  std::vector<std::vector<double>> dd(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) dd[i][i] = std::exp(nodes[i]);
  for (int len = 1; len < n; ++len) {
    for (int i = 0; i + len < n; ++i) {
      const int j = i + len;
      const double spread = nodes[j] - nodes[i];
      if (spread <= thresh) dd[i][j] = series_block(nodes, i, j);
      else dd[i][j] = (dd[i + 1][j] - dd[i][j - 1]) / spread;
    }
  }
  return dd[0][n - 1];
}

namespace {

struct Kahan {
  double sum = 0, carry = 0;
  void add(double x) {
    double y = x - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

ExpMoments exp_moments(const PolytopeD& p, const VecD& c, ExpMode mode) {
  if (!p.triangulated()) fail(Errc::MalformedInput, "exp_moments requires a triangulation");
  if (c.size() != p.dim) fail(Errc::MalformedInput, "weight vector dimension mismatch");
  const int m = p.dim;

  Kahan acc0;
  std::vector<Kahan> acc1(m);
  std::vector<Kahan> acc2(m * m);
  MatD edges(m, m);
  std::vector<double> base(m + 1), nodes;
  for (const auto& simplex : p.simplices) {
    for (int j = 0; j < m; ++j)
      edges.col(j) = p.vertices.col(simplex[j + 1]) - p.vertices.col(simplex[0]);
    const double jac = std::abs(edges.determinant());  // m! * volume
    for (int t = 0; t <= m; ++t) base[t] = c.dot(p.vertices.col(simplex[t]));

    acc0.add(jac * detail::exp_divided_difference(base, mode));

    for (int a = 0; a <= m; ++a) {
      nodes = base;
      nodes.push_back(base[a]);
      const double w = jac * detail::exp_divided_difference(nodes, mode);
      const auto va = p.vertices.col(simplex[a]);
      for (int d = 0; d < m; ++d) acc1[d].add(w * va(d));
    }

    for (int a = 0; a <= m; ++a) {
      for (int b = a; b <= m; ++b) {
        nodes = base;
        nodes.push_back(base[a]);
        nodes.push_back(base[b]);
        // Off-diagonal pairs count twice as ordered pairs; the diagonal picks
        // up the node-multiplicity factor of d/dx f[..,x,x] = 2 f[..,x,x,x].
        const double w = 2.0 * jac * detail::exp_divided_difference(nodes, mode);
        const auto va = p.vertices.col(simplex[a]);
        const auto vb = p.vertices.col(simplex[b]);
        for (int d1 = 0; d1 < m; ++d1)
          for (int d2 = 0; d2 < m; ++d2)
            acc2[d1 * m + d2].add(0.5 * w * (va(d1) * vb(d2) + vb(d1) * va(d2)));
      }
    }
  }

  ExpMoments out;
  out.i0 = acc0.sum;
  out.i1 = VecD(m);
  out.i2 = MatD(m, m);
  for (int d = 0; d < m; ++d) out.i1(d) = acc1[d].sum;
  for (int d1 = 0; d1 < m; ++d1)
    for (int d2 = 0; d2 < m; ++d2) out.i2(d1, d2) = acc2[d1 * m + d2].sum;
  out.i2 = 0.5 * (out.i2 + out.i2.transpose()).eval();
  return out;
}

}  // namespace sasakit
