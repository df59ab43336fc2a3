#include "sasakit/transverse_potential.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "sasakit/exact_linalg.hpp"
#include "sasakit/rational.hpp"

namespace sasakit {

PotentialModel make_potential_model(const ConeModel& cone, const ReebVector& xi) {
  require_feasible(xi);
  return PotentialModel{cone, xi.xi};
}

namespace {

// Facet values l_i(y); throws nothing, caller checks positivity.
VecD facet_values(const PotentialModel& model, const VecD& y) {
  return model.cone.normals_d * y;
}

double xlogx(double t) { return t > 0 ? t * std::log(t) : 0.0; }

}  // namespace

double sym_potential(const PotentialModel& model, const VecD& y) {
  const VecD l = facet_values(model, y);
  const double lxi = model.xi.dot(y);
  const double linf = l.sum();
  double g = 0;
  for (Eigen::Index i = 0; i < l.size(); ++i) g += xlogx(l(i));
  return 0.5 * (g + xlogx(lxi) - xlogx(linf));
}

VecD sym_potential_grad(const PotentialModel& model, const VecD& y) {
  const int n = model.cone.n();
  const VecD l = facet_values(model, y);
  const double lxi = model.xi.dot(y);
  const double linf = l.sum();
  VecD grad = VecD::Zero(n);
  for (int i = 0; i < model.cone.facet_count(); ++i)
    grad += std::log(l(i)) * model.cone.normals_d.row(i).transpose();
  grad += (1.0 + std::log(lxi)) * model.xi;
  grad -= std::log(linf) * model.cone.l_infty_d;
  return 0.5 * grad;
}

MatD sym_potential_hess(const PotentialModel& model, const VecD& y) {
  const int n = model.cone.n();
  const VecD l = facet_values(model, y);
  const double lxi = model.xi.dot(y);
  const double linf = l.sum();
  MatD hess = MatD::Zero(n, n);
  for (int i = 0; i < model.cone.facet_count(); ++i) {
    const VecD row = model.cone.normals_d.row(i).transpose();
    hess += row * row.transpose() / l(i);
  }
  hess += model.xi * model.xi.transpose() / lxi;
  hess -= model.cone.l_infty_d * model.cone.l_infty_d.transpose() / linf;
  return 0.5 * hess;
}

namespace {

// The solver state is kept as an exact rational vector: facet values
// l_i(y) are dot products with 10^20-scale cancellation near the grid
// boundary, far below the binary64 noise floor, but their exact rational
// values convert to double with full relative accuracy at any scale.
// Logs, Hessians and Newton steps stay in double.
struct ExactFacets {
  VecQ l_q;
  Rational lxi_q;
  Rational linf_q;
  VecD l;       // l_i(y)
  double lxi;   // <xi, y>
  double linf;  // sum_i l_i(y)
  bool interior;
};

ExactFacets eval_facets(const MatQ& normals_q, const VecQ& xi_q, const VecQ& y) {
  ExactFacets out;
  const int d = static_cast<int>(normals_q.rows());
  out.l_q.resize(d);
  out.l.resize(d);
  out.interior = true;
  Rational sum = 0;
  for (int i = 0; i < d; ++i) {
    Rational li = normals_q.row(i) * y;
    if (li <= 0) out.interior = false;
    out.l_q(i) = li;
    out.l(i) = to_double(li);
    sum += li;
  }
  out.lxi_q = xi_q.dot(y);
  if (out.lxi_q <= 0) out.interior = false;
  out.linf_q = sum;
  out.lxi = to_double(out.lxi_q);
  out.linf = to_double(sum);
  return out;
}

// Exact Newton system: the Hessian of G has rational entries given the
// rational state, so the solve loses nothing to its (arbitrarily bad)
// conditioning near the cone boundary.  The step is kept rational: its
// components cancel against nearly-tight facets below binary64 resolution,
// so a double-rounded step would throw the iterate off those facets.
VecQ newton_step_exact(const MatQ& normals_q, const VecQ& xi_q, const ExactFacets& f,
                       const VecD& residual) {
  const int n = static_cast<int>(normals_q.cols());
  const int d = static_cast<int>(normals_q.rows());
  MatQ hess = MatQ::Zero(n, n);
  for (int i = 0; i < d; ++i) {
    for (int a = 0; a < n; ++a) {
      if (normals_q(i, a) == 0) continue;
      for (int b = 0; b < n; ++b)
        hess(a, b) += normals_q(i, a) * normals_q(i, b) / f.l_q(i);
    }
  }
  VecQ lam_inf = VecQ::Zero(n);
  for (int i = 0; i < d; ++i) lam_inf += normals_q.row(i).transpose();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      hess(a, b) += xi_q(a) * xi_q(b) / f.lxi_q - lam_inf(a) * lam_inf(b) / f.linf_q;
  const VecD rhs = -2.0 * residual;
  LinSolveQ sol = solve_exact(hess, rationalize(rhs));
  if (!sol.consistent) fail(Errc::NoConvergence, "singular Hessian in Legendre solve");
  return sol.x;
}

VecD grad_from_facets(const PotentialModel& model, const ExactFacets& f) {
  const int n = model.cone.n();
  VecD grad = VecD::Zero(n);
  for (int i = 0; i < model.cone.facet_count(); ++i)
    grad += std::log(f.l(i)) * model.cone.normals_d.row(i).transpose();
  grad += (1.0 + std::log(f.lxi)) * model.xi;
  grad -= std::log(f.linf) * model.cone.l_infty_d;
  return 0.5 * grad;
}

// Round to ~`bits` significant bits so denominators stay bounded across
// Newton iterations.
Rational round_to_bits(const Rational& q, int bits) {
  if (q == 0) return q;
  const Integer num = abs(numerator(q));
  const Integer den = denominator(q);
  const long exp = static_cast<long>(msb(num)) - static_cast<long>(msb(den));
  const long shift = bits - exp;
  if (shift <= 0) return q;
  Integer scaled = (numerator(q) << static_cast<unsigned>(shift)) / den;
  return Rational(scaled, Integer(1) << static_cast<unsigned>(shift));
}

struct OrbitSolve {
  VecQ y;
  ExactFacets facets;
};

OrbitSolve legendre_point_exact(const PotentialModel& model, const VecD& xtilde, double tol,
                                int max_iter) {
  constexpr int kStateBits = 512;
  const MatQ normals_q = to_rational(model.cone.diagram.normals);
  const VecQ xi_q = rationalize(model.xi);

  // Start on the ray-sum direction scaled to l_xi = 1, then match the
  // xi-component of the target: grad G(s y) = grad G(y) + (log s / 2) xi.
  VecD y0 = VecD::Zero(model.cone.n());
  for (int k = 0; k < model.cone.ray_count(); ++k) y0 += model.cone.rays_d.col(k);
  y0 /= model.xi.dot(y0);
  VecQ y = rationalize(y0);
  {
    ExactFacets f = eval_facets(normals_q, xi_q, y);
    const VecD r = xtilde - grad_from_facets(model, f);
    const Rational scale =
        rational_from_double(std::exp(2.0 * r.dot(model.xi) / model.xi.squaredNorm()));
    for (Eigen::Index j = 0; j < y.size(); ++j)
      y(j) = round_to_bits(Rational(y(j) * scale), kStateBits);
  }

  // Damped Newton on F(y) = grad G(y) - xtilde with the residual norm as
  // merit: hess G is positive definite, so the Newton direction descends |F|.
  // The solve is Jacobi-scaled (the facet spread makes hess G arbitrarily
  // ill-conditioned near the boundary) and the step is capped by the
  // relative facet change it induces.
  ExactFacets facets = eval_facets(normals_q, xi_q, y);
  VecD residual = grad_from_facets(model, facets) - xtilde;
  double norm = residual.norm();
  for (int iter = 0; iter < max_iter; ++iter) {
    if (residual.lpNorm<Eigen::Infinity>() <= tol) return {std::move(y), std::move(facets)};
    // Well-conditioned iterates take the double solve; the exact solve is
    // reserved for the extreme facet spreads where binary64 steps lose the
    // tangency to nearly-tight facets.
    VecQ step;
    const double spread = facets.l.maxCoeff() / facets.l.minCoeff();
    if (spread < 1e9) {
      MatD hess = MatD::Zero(model.cone.n(), model.cone.n());
      for (int i = 0; i < model.cone.facet_count(); ++i) {
        const VecD row = model.cone.normals_d.row(i).transpose();
        hess += row * row.transpose() / facets.l(i);
      }
      hess += model.xi * model.xi.transpose() / facets.lxi;
      hess -= model.cone.l_infty_d * model.cone.l_infty_d.transpose() / facets.linf;
      VecD sd = Eigen::LDLT<MatD>(0.5 * hess).solve(-residual);
      if (sd.allFinite()) step = rationalize(sd);
    }
    if (step.size() == 0) step = newton_step_exact(normals_q, xi_q, facets, residual);

    // Cap the linearized relative change of every facet value (exact ratios:
    // the pairings cancel below double resolution near tight facets).
    double rel = 0;
    for (int i = 0; i < model.cone.facet_count(); ++i) {
      const Rational pairing = normals_q.row(i).transpose().dot(step);
      rel = std::max(rel, std::abs(to_double(Rational(pairing / facets.l_q(i)))));
    }
    rel = std::max(rel, std::abs(to_double(Rational(xi_q.dot(step) / facets.lxi_q))));
    Rational t = rel > 16.0 ? rational_from_double(16.0 / rel) : Rational(1);

    bool accepted = false;
    for (int backtrack = 0; backtrack < 120; ++backtrack) {
      VecQ trial = y;
      for (Eigen::Index j = 0; j < y.size(); ++j)
        trial(j) = round_to_bits(Rational(y(j) + t * step(j)), kStateBits);
      ExactFacets trial_facets = eval_facets(normals_q, xi_q, trial);
      if (trial_facets.interior) {
        VecD trial_residual = grad_from_facets(model, trial_facets) - xtilde;
        const double trial_norm = trial_residual.norm();
        if (trial_norm <= (1.0 - 1e-4 * to_double(t)) * norm) {
          y = std::move(trial);
          facets = std::move(trial_facets);
          residual = std::move(trial_residual);
          norm = trial_norm;
          accepted = true;
          break;
        }
      }
      t /= 2;
    }
    if (!accepted) break;
  }
  if (residual.lpNorm<Eigen::Infinity>() <= tol) return {std::move(y), std::move(facets)};
  fail(Errc::NoConvergence, "Legendre inversion stalled with residual " +
                                std::to_string(residual.lpNorm<Eigen::Infinity>()));
}

}  // namespace

VecD legendre_point(const PotentialModel& model, const VecD& xtilde, double tol, int max_iter) {
  return to_double(legendre_point_exact(model, xtilde, tol, max_iter).y);
}

double u0(const PotentialModel& model, const SigmaModel& sigma, const VecD& x) {
  OrbitSolve sol = legendre_point_exact(model, sigma.basis_d * x, 1e-11, 400);
  return 0.5 * std::log(sol.facets.lxi);
}

VecD du0(const PotentialModel& model, const SigmaModel& sigma, const VecD& x) {
  OrbitSolve sol = legendre_point_exact(model, sigma.basis_d * x, 1e-11, 400);
  const VecQ xi_q = rationalize(model.xi);
  const MatQ basis_q = to_rational(sigma.basis);
  const Rational lxi = xi_q.dot(sol.y);
  VecD v(sigma.m());
  for (int k = 0; k < sigma.m(); ++k) v(k) = to_double(Rational(basis_q.col(k).dot(sol.y) / lxi));
  return v;
}

double vbar(const SigmaModel& sigma, const VecD& x) {
  double best = -std::numeric_limits<double>::infinity();
  for (int v = 0; v < sigma.sigma.vertex_count(); ++v)
    best = std::max(best, sigma.sigma.vertices.col(v).dot(x));
  return best;
}

double g0(const SigmaModel& sigma, const VecD& v) {
  const int d = static_cast<int>(sigma.lambda_primed.cols());
  double sum = 0, linf = 0;
  for (int i = 0; i < d; ++i) {
    const double li = sigma.lambda_primed.col(i).dot(v) + sigma.offset;
    sum += xlogx(li);
    linf += li;
  }
  return 0.5 * (sum - xlogx(linf) + 1.0);
}

MatD g0_hessian(const SigmaModel& sigma, const VecD& v) {
  const int m = sigma.m();
  const int d = static_cast<int>(sigma.lambda_primed.cols());
  MatD hess = MatD::Zero(m, m);
  VecD lam_inf = VecD::Zero(m);
  double linf = 0;
  for (int i = 0; i < d; ++i) {
    const VecD lam = sigma.lambda_primed.col(i);
    const double li = lam.dot(v) + sigma.offset;
    hess += lam * lam.transpose() / li;
    lam_inf += lam;
    linf += li;
  }
  hess -= lam_inf * lam_inf.transpose() / linf;
  return 0.5 * hess;
}

double g0_hessian_det(const SigmaModel& sigma, const VecD& lprime) {
  const int m = sigma.m();
  const int d = static_cast<int>(sigma.lambda_primed.cols());
  // Columns 0..d-1 are lambda'_i with coefficient 1/l'_i; column d is
  // lambda'_inf with coefficient -1/l'_inf.
  MatD cols(m, d + 1);
  VecD coeff(d + 1);
  cols.leftCols(d) = sigma.lambda_primed;
  cols.col(d) = sigma.lambda_primed.rowwise().sum();
  double linf = 0;
  for (int i = 0; i < d; ++i) {
    coeff(i) = 1.0 / lprime(i);
    linf += lprime(i);
  }
  coeff(d) = -1.0 / linf;

  double det = 0;
  std::vector<int> idx(m);
  MatD sub(m, m);
  // det(sum_k c_k w_k w_k^T) = sum_{|S|=m} (prod_{k in S} c_k) det(W_S)^2.
  std::function<void(int, int)> enumerate = [&](int start, int depth) {
    if (depth == m) {
      for (int j = 0; j < m; ++j) sub.col(j) = cols.col(idx[j]);
      const double minor = sub.determinant();
      double term = minor * minor;
      for (int j = 0; j < m; ++j) term *= coeff(idx[j]);
      det += term;
      return;
    }
    for (int k = start; k <= d - (m - depth) + 1 && k <= d; ++k) {
      idx[depth] = k;
      enumerate(k + 1, depth + 1);
    }
  };
  enumerate(0, 0);
  return det / std::pow(2.0, m);
}

namespace {

template <typename F>
MatD hessian_fd(F&& f, const VecD& x) {
  const int m = static_cast<int>(x.size());
  const double h = 1e-4 * std::max(1.0, x.lpNorm<Eigen::Infinity>());
  MatD hess(m, m);
  const double center = f(x);
  for (int i = 0; i < m; ++i) {
    VecD e = VecD::Zero(m);
    e(i) = h;
    hess(i, i) = (f(x + e) - 2 * center + f(x - e)) / (h * h);
    for (int j = i + 1; j < m; ++j) {
      VecD ej = VecD::Zero(m);
      ej(j) = h;
      const double val =
          (f(x + e + ej) - f(x + e - ej) - f(x - e + ej) + f(x - e - ej)) / (4 * h * h);
      hess(i, j) = val;
      hess(j, i) = val;
    }
  }
  return hess;
}

}  // namespace

MatD u0_hessian_fd(const PotentialModel& model, const SigmaModel& sigma, const VecD& x) {
  return hessian_fd([&](const VecD& at) { return u0(model, sigma, at); }, x);
}

MatD g0_hessian_fd(const SigmaModel& sigma, const VecD& v) {
  return hessian_fd([&](const VecD& at) { return g0(sigma, at); }, v);
}

PotentialCheckReport potential_checks(const PotentialModel& model, const SigmaModel& sigma,
                                      double radius, int samples) {
  if (!(radius > 0) || samples < 2)
    fail(Errc::MalformedInput, "potential_checks requires radius > 0 and samples >= 2");
  const int m = sigma.m();

  PotentialCheckReport rep;
  rep.m = m;
  rep.radius = radius;
  rep.samples = samples;

  int total = 1;
  for (int i = 0; i < m; ++i) total *= samples;
  rep.total = total;

  double inner_asym = 0, outer_asym = 0, inner_ma = 0, outer_ma = 0;
  for (int flat = 0; flat < total; ++flat) {
    VecD x(m);
    int rem = flat;
    for (int i = m - 1; i >= 0; --i) {
      const int k = rem % samples;
      rem /= samples;
      x(i) = -radius + 2.0 * radius * k / (samples - 1);
    }
    PotentialCheckRow row;
    row.x = x;
    try {
      OrbitSolve sol = legendre_point_exact(model, sigma.basis_d * x, 1e-11, 400);
      row.u0_value = 0.5 * std::log(sol.facets.lxi);
      row.vbar_value = vbar(sigma, x);
      row.diff = std::abs(row.u0_value - row.vbar_value);
      // log det Hess u0 = -log det Hess G0 at v = Du0(x) (Legendre duality);
      // the dual side stays well scaled where direct differences cannot.
      // The facet values l'_i = l_i(y)/l_xi keep full relative accuracy.
      VecD lprime(sigma.lambda_primed.cols());
      for (int i = 0; i < static_cast<int>(sigma.lambda_primed.cols()); ++i)
        lprime(i) = sol.facets.l(i) / sol.facets.lxi;
      const double dual_det = g0_hessian_det(sigma, lprime);
      if (!(dual_det > 0) || !std::isfinite(dual_det))
        throw Error(Errc::NoConvergence, "degenerate dual Hessian");
      row.ma_residual = std::abs(-std::log(dual_det) + (2 * m + 2) * row.u0_value);
      if (!std::isfinite(row.u0_value) || !std::isfinite(row.ma_residual))
        throw Error(Errc::NoConvergence, "non-finite value");
    } catch (const Error&) {
      row.skipped = true;
      ++rep.skipped;
      rep.rows.push_back(std::move(row));
      continue;
    }

    rep.asym_sup = std::max(rep.asym_sup, row.diff);
    rep.ma_sup = std::max(rep.ma_sup, row.ma_residual);
    const double r = x.lpNorm<Eigen::Infinity>();
    if (r <= radius / 2) {
      inner_asym = std::max(inner_asym, row.diff);
      inner_ma = std::max(inner_ma, row.ma_residual);
    }
    if (r >= radius / 2) {
      outer_asym = std::max(outer_asym, row.diff);
      outer_ma = std::max(outer_ma, row.ma_residual);
    }
    rep.rows.push_back(std::move(row));
  }

  if (rep.skipped * 100 > rep.total)
    fail(Errc::NoConvergence, "more than 1% of grid points failed the Legendre solve (" +
                                  std::to_string(rep.skipped) + " of " +
                                  std::to_string(rep.total) + ")");

  rep.asym_proxy = outer_asym / std::max(inner_asym, 1e-300);
  rep.ma_proxy = outer_ma / std::max(inner_ma, 1e-300);
  return rep;
}

}  // namespace sasakit
