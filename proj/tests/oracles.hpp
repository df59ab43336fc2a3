// Test-side oracles, independent of the library's computation paths:
// subset enumeration stands in for double description, rejection-sampling
// Monte Carlo for the closed-form integrals, golden section and finite
// differences for the optimizers.
#pragma once

#include <cmath>
#include <cstdlib>
#include <functional>
#include <random>
#include <vector>

#include "sasakit/exact_linalg.hpp"
#include "sasakit/polytope.hpp"
#include "sasakit/rational.hpp"
#include "sasakit/toric_cone.hpp"

namespace sasakit::testing {

inline std::uint64_t oracle_seed() {
  if (const char* env = std::getenv("SASAKIT_SEED")) return std::strtoull(env, nullptr, 10);
  return 20240817ull;
}

inline std::mt19937_64 oracle_rng(std::uint64_t salt = 0) {
  return std::mt19937_64(oracle_seed() + salt);
}

// ---------------------------------------------------------------------------
// Exact brute-force cone rays: every (n-1)-subset of facets with a rank-1
// kernel contributes a candidate direction, kept if it satisfies all
// halfspaces and is tight on n-1 independent rows.
inline MatZ brute_force_rays(const MatZ& normals) {
  const int n = static_cast<int>(normals.cols());
  const int d = static_cast<int>(normals.rows());
  std::vector<VecZ> rays;
  std::vector<int> subset(n - 1);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == n - 1) {
      MatQ sub(n - 1, n);
      for (int i = 0; i < n - 1; ++i) sub.row(i) = to_rational(normals).row(subset[i]);
      MatQ kernel = nullspace_q(sub);
      if (kernel.cols() != 1) return;
      for (int sign = -1; sign <= 1; sign += 2) {
        VecQ cand = sign * kernel.col(0);
        bool ok = true;
        for (int j = 0; j < d && ok; ++j) {
          Rational dot = 0;
          for (int k = 0; k < n; ++k) dot += Rational(normals(j, k)) * cand(k);
          if (dot < 0) ok = false;
        }
        if (ok) rays.push_back(primitive_ray(cand));
      }
      return;
    }
    for (int i = start; i < d; ++i) {
      subset[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);

  auto lex_less = [](const VecZ& a, const VecZ& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i)
      if (a(i) != b(i)) return a(i) < b(i);
    return false;
  };
  std::sort(rays.begin(), rays.end(), lex_less);
  rays.erase(std::unique(rays.begin(), rays.end(),
                         [](const VecZ& a, const VecZ& b) { return a == b; }),
             rays.end());
  // Keep only extreme rays: tight rows must have rank n-1.
  std::vector<VecZ> extreme;
  for (const VecZ& r : rays) {
    std::vector<int> tight;
    for (int j = 0; j < d; ++j) {
      Integer dot = 0;
      for (int k = 0; k < n; ++k) dot += normals(j, k) * r(k);
      if (dot == 0) tight.push_back(j);
    }
    MatQ sub(static_cast<int>(tight.size()), n);
    for (size_t i = 0; i < tight.size(); ++i) sub.row(static_cast<int>(i)) = to_rational(normals).row(tight[i]);
    if (rank_q(sub) == n - 1) extreme.push_back(r);
  }
  MatZ out(n, static_cast<int>(extreme.size()));
  for (size_t k = 0; k < extreme.size(); ++k) out.col(static_cast<int>(k)) = extreme[k];
  return out;
}

// Exact brute-force vertex enumeration via m-subsets of facets.
inline std::vector<VecQ> brute_force_vertices(const MatQ& a, const VecQ& b) {
  const int m = static_cast<int>(a.cols());
  const int f = static_cast<int>(a.rows());
  std::vector<VecQ> verts;
  std::vector<int> subset(m);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == m) {
      MatQ sub(m, m);
      VecQ rhs(m);
      for (int i = 0; i < m; ++i) {
        sub.row(i) = a.row(subset[i]);
        rhs(i) = -b(subset[i]);
      }
      if (rank_q(sub) < m) return;
      LinSolveQ sol = solve_exact(sub, rhs);
      if (!sol.consistent) return;
      for (int j = 0; j < f; ++j) {
        Rational val = b(j);
        for (int k = 0; k < m; ++k) val += a(j, k) * sol.x(k);
        if (val < 0) return;
      }
      verts.push_back(sol.x);
      return;
    }
    for (int i = start; i < f; ++i) {
      subset[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  auto lex_less = [](const VecQ& x, const VecQ& y) {
    for (Eigen::Index i = 0; i < x.size(); ++i)
      if (x(i) != y(i)) return x(i) < y(i);
    return false;
  };
  std::sort(verts.begin(), verts.end(), lex_less);
  verts.erase(std::unique(verts.begin(), verts.end(),
                          [](const VecQ& x, const VecQ& y) { return x == y; }),
              verts.end());
  return verts;
}

// ---------------------------------------------------------------------------
// Monte Carlo estimates with standard errors.
struct McScalar {
  double value = 0;
  double se = 0;
};

struct McMoments {
  McScalar i0;
  std::vector<McScalar> i1;
  std::vector<McScalar> i2;  // row-major m x m
};

inline void bounding_box(const PolytopeD& p, VecD& lo, VecD& hi) {
  lo = p.vertices.rowwise().minCoeff();
  hi = p.vertices.rowwise().maxCoeff();
}

inline McScalar mc_volume(const PolytopeD& p, long samples, std::mt19937_64& rng) {
  VecD lo, hi;
  bounding_box(p, lo, hi);
  const int m = p.dim;
  double box = 1;
  for (int i = 0; i < m; ++i) box *= hi(i) - lo(i);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  long hits = 0;
  VecD v(m);
  for (long s = 0; s < samples; ++s) {
    for (int i = 0; i < m; ++i) v(i) = lo(i) + (hi(i) - lo(i)) * unif(rng);
    if (((p.facet_normals * v + p.facet_offsets).array() >= 0).all()) ++hits;
  }
  const double frac = static_cast<double>(hits) / samples;
  McScalar out;
  out.value = box * frac;
  out.se = box * std::sqrt(frac * (1 - frac) / samples);
  return out;
}

inline McMoments mc_exp_moments(const PolytopeD& p, const VecD& c, long samples,
                                std::mt19937_64& rng) {
  VecD lo, hi;
  bounding_box(p, lo, hi);
  const int m = p.dim;
  double box = 1;
  for (int i = 0; i < m; ++i) box *= hi(i) - lo(i);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  const int nstat = 1 + m + m * m;
  std::vector<double> sum(nstat, 0.0), sumsq(nstat, 0.0), g(nstat);
  VecD v(m);
  for (long s = 0; s < samples; ++s) {
    for (int i = 0; i < m; ++i) v(i) = lo(i) + (hi(i) - lo(i)) * unif(rng);
    const bool inside = ((p.facet_normals * v + p.facet_offsets).array() >= 0).all();
    const double w = inside ? std::exp(c.dot(v)) : 0.0;
    g[0] = w;
    for (int i = 0; i < m; ++i) g[1 + i] = w * v(i);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) g[1 + m + i * m + j] = w * v(i) * v(j);
    for (int k = 0; k < nstat; ++k) {
      sum[k] += g[k];
      sumsq[k] += g[k] * g[k];
    }
  }
  auto stat = [&](int k) {
    const double mean = sum[k] / samples;
    const double var = std::max(0.0, sumsq[k] / samples - mean * mean);
    McScalar out;
    out.value = box * mean;
    out.se = box * std::sqrt(var / samples);
    return out;
  };
  McMoments out;
  out.i0 = stat(0);
  for (int i = 0; i < m; ++i) out.i1.push_back(stat(1 + i));
  for (int k = 0; k < m * m; ++k) out.i2.push_back(stat(1 + m + k));
  return out;
}

// ---------------------------------------------------------------------------
inline double golden_section(const std::function<double(double)>& f, double lo, double hi,
                             double tol) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  return (a + b) / 2;
}

template <typename F>
VecD fd_gradient(F&& f, const VecD& x, double h) {
  VecD g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    VecD e = VecD::Zero(x.size());
    e(i) = h;
    g(i) = (f(x + e) - f(x - e)) / (2 * h);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Fixtures.
inline ToricDiagram diagram_c3() {
  MatZ n(3, 3);
  n << 1, 0, 0, 0, 1, 0, 0, 0, 1;
  return make_toric_diagram("C3", 3, n);
}

inline ToricDiagram diagram_conifold() {
  MatZ n(4, 3);
  n << 1, 0, 0, 1, 1, 0, 1, 1, 1, 1, 0, 1;
  return make_toric_diagram("conifold", 3, n);
}

inline ToricDiagram diagram_dp1() {
  MatZ n(4, 3);
  n << 1, 0, 0, 1, 0, 1, 1, 1, 2, 1, 1, 0;
  return make_toric_diagram("dP1", 3, n);
}

inline ToricDiagram diagram_dp2() {
  MatZ n(5, 3);
  n << 1, 0, 0, 1, 0, 1, 1, 1, 2, 1, 2, 1, 1, 1, 0;
  return make_toric_diagram("dP2", 3, n);
}

// A random feasible Reeb vector: slice point x0 + B z for small random z,
// redrawn until interior.
inline ReebVector random_feasible_reeb(const ConeModel& cone, const MatZ& basis,
                                       std::mt19937_64& rng, double spread = 0.4) {
  const MatD basis_d = to_double(basis);
  VecQ b(cone.n());
  for (int j = 0; j < cone.n(); ++j) b(j) = Rational(cone.l_infty(j));
  Rational pairing = 0;
  for (int j = 0; j < cone.n(); ++j) pairing += cone.gamma(j) * b(j);
  VecD x0 = to_double((Rational(-cone.n()) / pairing * b.array()).matrix().eval());
  std::normal_distribution<double> normal(0.0, spread);
  for (int attempt = 0; attempt < 100; ++attempt) {
    VecD z(basis_d.cols());
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = normal(rng);
    ReebVector xi = check_reeb(cone, (x0 + basis_d * z).eval());
    if (xi.feasible()) return xi;
  }
  return check_reeb(cone, x0);
}

}  // namespace sasakit::testing
