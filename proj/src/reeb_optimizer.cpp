#include "sasakit/reeb_optimizer.hpp"

#include <cmath>

#include "sasakit/exact_linalg.hpp"
#include "sasakit/rational.hpp"

namespace sasakit {

ReebVector initial_point(const ConeModel& cone) {
  const int n = cone.n();
  VecQ b(n);
  for (int j = 0; j < n; ++j) b(j) = Rational(cone.l_infty(j));
  Rational pairing = 0;
  for (int j = 0; j < n; ++j) pairing += cone.gamma(j) * b(j);
  // <gamma, sum lambda_j> = -d < 0 always, by <lambda_j, gamma> = -1.
  if (pairing >= 0) fail(Errc::MalformedInput, "internal: canonical direction off the slice cone");
  Rational s = Rational(-n) / pairing;
  VecQ x0 = (s * b.array()).matrix();
  return reeb_feasible(cone, x0);
}

MatZ slice_basis(const ConeModel& cone) {
  VecZ g = primitive_line(cone.gamma);
  return integer_kernel_basis(g);
}

MinimizeResult minimize(const VolumeModel& model, const ReebVector& x0, double tol,
                        int max_iter) {
  if (!x0.feasible()) fail(Errc::NotFeasible, "minimize requires a feasible starting point");
  const int n = model.cone.n();
  const int m = n - 1;
  const MatD basis = to_double(slice_basis(model.cone));

  VecD x = x0.xi;
  MinimizeResult res;

  auto reduced_grad = [&](const VecD& at) -> VecD { return basis.transpose() * grad_vol(model, at); };

  double value = vol(model, x);
  VecD grad = reduced_grad(x);
  const double grad0 = grad.norm();
  const double threshold = tol * (grad0 > 0 ? grad0 : 1.0);
  res.trace.push_back({x, value, grad0});

  constexpr double kArmijo = 1e-4;
  int iter = 0;
  while (grad.norm() > threshold && iter < max_iter) {
    MatD hess = basis.transpose() * hess_vol(model, x) * basis;
    Eigen::LDLT<MatD> ldlt(hess);
    VecD step;
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
      step = ldlt.solve(-grad);
    } else {
      MatD reg = hess + 1e-12 * hess.trace() * MatD::Identity(m, m);
      step = Eigen::LDLT<MatD>(reg).solve(-grad);
    }
    if (!step.allFinite() || grad.dot(step) >= 0) step = -grad;  // fallback direction

    double t = 1.0;
    const double slope = grad.dot(step);
    VecD trial;
    double trial_value = 0;
    bool accepted = false;
    for (int backtrack = 0; backtrack < 60; ++backtrack) {
      trial = x + t * (basis * step);
      trial_value = vol_or_inf(model, trial);
      if (std::isfinite(trial_value) && trial_value <= value + kArmijo * t * slope) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      res.diagnostic = "line search failed to make progress";
      break;
    }
    x = trial;
    value = trial_value;
    grad = reduced_grad(x);
    ++iter;
    res.trace.push_back({x, value, grad.norm()});
  }

  res.x_c = x;
  res.value = value;
  res.slice_grad_norm = grad.norm();
  res.iterations = iter;
  res.converged = grad.norm() <= threshold;
  if (!res.converged && res.diagnostic.empty())
    res.diagnostic = "max iterations reached with gradient norm " + std::to_string(grad.norm());
  res.regularity = classify_regularity(x);
  return res;
}

RegularityTag classify_regularity(const VecD& x_c, const Integer& denom_bound, double tol) {
  RegularityTag tag;
  std::vector<std::pair<Integer, Integer>> cert;
  for (Eigen::Index i = 0; i < x_c.size(); ++i) {
    RationalApprox approx = reconstruct_rational(x_c(i), denom_bound, tol);
    if (!approx.ok) {
      tag.kind = RegularityTag::IrregularNumeric;
      tag.certificate.clear();
      return tag;
    }
    cert.emplace_back(approx.num, approx.den);
  }
  tag.kind = RegularityTag::RationalReeb;
  tag.certificate = std::move(cert);
  return tag;
}

}  // namespace sasakit
