#include "sasakit/futaki_soliton.hpp"

#include <cmath>

#include "sasakit/exact_linalg.hpp"
#include "sasakit/rational.hpp"
#include "sasakit/reeb_optimizer.hpp"

namespace sasakit {

SigmaModel build_sigma(const ConeModel& cone, const ReebVector& xi) {
  return build_sigma(cone, xi, slice_basis(cone));
}

SigmaModel build_sigma(const ConeModel& cone, const ReebVector& xi, const MatZ& basis) {
  require_feasible(xi);
  const int n = cone.n();
  const int m = n - 1;
  const int d = cone.facet_count();

  SigmaModel s;
  s.basis = basis;
  s.basis_d = to_double(basis);
  s.offset = 1.0 / n;
  s.xi = xi.xi;
  s.normals = cone.normals_d;
  s.lambda_primed.resize(m, d);

  if (xi.xi_exact && xi.on_slice) {
    // Exact decomposition lambda_i = B lambda'_i + xi/(m+1).
    MatQ bq = to_rational(basis);
    for (int i = 0; i < d; ++i) {
      VecQ w(n);
      for (int j = 0; j < n; ++j)
        w(j) = Rational(cone.diagram.normals(i, j)) - (*xi.xi_exact)(j) / n;
      LinSolveQ sol = solve_exact(bq, w);
      if (!sol.consistent)
        fail(Errc::MalformedInput, "internal: lambda' decomposition inconsistent");
      for (int k = 0; k < m; ++k) s.lambda_primed(k, i) = to_double(sol.x(k));
    }
  } else {
    // Least squares; the residual is bounded by the slice residual of xi.
    Eigen::ColPivHouseholderQR<MatD> qr(s.basis_d);
    for (int i = 0; i < d; ++i) {
      VecD w = cone.normals_d.row(i).transpose() - xi.xi / n;
      s.lambda_primed.col(i) = qr.solve(w);
    }
  }

  MatD a = s.lambda_primed.transpose();
  VecD b = VecD::Constant(d, s.offset);
  s.sigma = vertex_enumeration<double>(a, b);
  triangulate(s.sigma);

  // 0 must be interior: every facet functional evaluates to 1/(m+1) there.
  for (int i = 0; i < d; ++i) {
    if (!(b(i) > 0)) fail(Errc::MalformedInput, "internal: Sigma offset not positive");
  }
  return s;
}

namespace {

void require_consistent(const VolumeModel& volmodel, const SigmaModel& sigma,
                        const ReebVector& xi) {
  if (volmodel.cone.normals_d.rows() != sigma.normals.rows() ||
      volmodel.cone.normals_d != sigma.normals)
    fail(Errc::InconsistentInputs, "volume model and Sigma built from different cones");
  if (sigma.xi.size() != xi.xi.size() || sigma.xi != xi.xi)
    fail(Errc::InconsistentInputs, "Sigma was built at a different Reeb vector");
}

}  // namespace

FutakiReport futaki_report(const VolumeModel& volmodel, const SigmaModel& sigma,
                           const ReebVector& xi, double tol) {
  require_consistent(volmodel, sigma, xi);
  require_feasible(xi);

  FutakiReport rep;
  rep.tol = tol;
  rep.projected_grad = sigma.basis_d.transpose() * grad_vol(volmodel, xi.xi);
  rep.grad_norm = rep.projected_grad.norm();

  ExpMoments mom = exp_moments(sigma.sigma, VecD::Zero(sigma.m()));
  rep.sigma_barycenter = mom.i1 / mom.i0;
  rep.barycenter_norm = rep.sigma_barycenter.norm();

  rep.verdict = (rep.grad_norm <= tol && rep.barycenter_norm <= tol)
                    ? FutakiVerdict::UnobstructedAtTolerance
                    : FutakiVerdict::Obstructed;

  const double gg = rep.projected_grad.squaredNorm();
  if (gg > 0) {
    rep.fitted_ratio = rep.projected_grad.dot(rep.sigma_barycenter) / gg;
    const double num = (rep.sigma_barycenter - rep.fitted_ratio * rep.projected_grad).norm();
    rep.collinearity_residual = rep.barycenter_norm > 0 ? num / rep.barycenter_norm : 0.0;
  }
  return rep;
}

SolitonResult soliton_vector(const SigmaModel& sigma, double tol, int max_iter) {
  const int m = sigma.m();
  SolitonResult res;
  VecD c = VecD::Zero(m);

  auto weighted = [&](const VecD& at) { return exp_moments(sigma.sigma, at); };

  ExpMoments mom = weighted(c);
  VecD bary = mom.i1 / mom.i0;
  res.residual_trace.push_back(bary.norm());

  int iter = 0;
  while (bary.norm() > tol && iter < max_iter) {
    MatD cov = mom.i2 / mom.i0 - bary * bary.transpose();
    VecD step = Eigen::LDLT<MatD>(cov).solve(-bary);
    if (!step.allFinite()) fail(Errc::MaxIterations, "soliton Newton step failed");

    // log i0 is smooth and strictly convex on all of R^m for bounded Sigma;
    // halve the step until the objective decreases.
    const double f0 = std::log(mom.i0);
    const double slope = bary.dot(step);
    double t = 1.0;
    ExpMoments trial;
    for (int backtrack = 0; backtrack < 60; ++backtrack) {
      trial = weighted(c + t * step);
      if (std::isfinite(trial.i0) && std::log(trial.i0) <= f0 + 1e-4 * t * slope) break;
      t *= 0.5;
    }
    c += t * step;
    mom = trial;
    bary = mom.i1 / mom.i0;
    ++iter;
    res.residual_trace.push_back(bary.norm());
  }

  res.c = c;
  res.residual = bary.norm();
  res.iterations = iter;
  res.c_ambient = sigma.basis_d * c;
  if (res.residual > tol)
    fail(Errc::MaxIterations, "soliton Newton did not converge: residual " +
                                  std::to_string(res.residual) + " after " +
                                  std::to_string(iter) + " iterations");
  return res;
}

}  // namespace sasakit
