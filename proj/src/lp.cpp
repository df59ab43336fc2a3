#include "sasakit/lp.hpp"

#include <vector>

namespace sasakit {

namespace {

// Dense tableau in canonical form for the current basis.
struct Tableau {
  MatQ t;                  // m x (ncols + 1), last column is the rhs
  VecQ cost;               // reduced-cost row, size ncols
  Rational obj = 0;        // objective value (negated bookkeeping avoided)
  std::vector<int> basis;  // basic variable per row
  int enter_limit = 0;     // columns beyond this may never enter the basis

  int rows() const { return static_cast<int>(t.rows()); }
  int cols() const { return static_cast<int>(t.cols()) - 1; }

  void pivot(int row, int col) {
    t.row(row) /= t(row, col);
    for (int r = 0; r < rows(); ++r) {
      if (r == row || t(r, col) == 0) continue;
      t.row(r) -= t(r, col) * t.row(row);
    }
    if (cost(col) != 0) {
      obj += cost(col) * t(row, cols());
      cost -= (cost(col) * t.row(row).head(cols())).transpose();
    }
    basis[row] = col;
  }

  // Bland's rule; returns Optimal or Unbounded.
  LpStatus run() {
    for (;;) {
      int enter = -1;
      for (int j = 0; j < enter_limit; ++j) {
        if (cost(j) < 0) { enter = j; break; }
      }
      if (enter < 0) return LpStatus::Optimal;
      int leave = -1;
      Rational best;
      for (int r = 0; r < rows(); ++r) {
        if (t(r, enter) <= 0) continue;
        Rational ratio = t(r, cols()) / t(r, enter);
        if (leave < 0 || ratio < best ||
            (ratio == best && basis[r] < basis[leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave < 0) return LpStatus::Unbounded;
      pivot(leave, enter);
    }
  }
};

}  // namespace

LpResult solve_lp(const MatQ& a, const VecQ& b, const VecQ& c) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  // Standard form: x = u - w, slack s:  A u - A w - s = b, all >= 0.
  const int ncols = 2 * n + m;

  Tableau tab;
  tab.t = MatQ::Zero(m, ncols + m + 1);
  for (int r = 0; r < m; ++r) {
    int sgn = (b(r) < 0) ? -1 : 1;
    for (int j = 0; j < n; ++j) {
      tab.t(r, j) = sgn * a(r, j);
      tab.t(r, n + j) = -sgn * a(r, j);
    }
    tab.t(r, 2 * n + r) = -sgn;          // slack
    tab.t(r, ncols + r) = 1;             // artificial
    tab.t(r, ncols + m) = sgn * b(r);
  }
  tab.basis.resize(m);
  for (int r = 0; r < m; ++r) tab.basis[r] = ncols + r;

  // Phase 1: minimize the sum of artificials.
  tab.cost = VecQ::Zero(ncols + m);
  tab.obj = 0;
  for (int r = 0; r < m; ++r) {
    tab.cost.head(ncols) -= tab.t.row(r).head(ncols).transpose();
    tab.obj += tab.t(r, ncols + m);
  }
  LpStatus st = tab.run();
  (void)st;  // phase 1 is bounded below by 0
  if (tab.obj != 0) return {LpStatus::Infeasible, Rational(0), VecQ()};

  // Drive leftover artificials out of the basis; drop redundant rows.
  std::vector<int> keep;
  for (int r = 0; r < m; ++r) {
    if (tab.basis[r] < ncols) { keep.push_back(r); continue; }
    int col = -1;
    for (int j = 0; j < ncols; ++j) {
      if (tab.t(r, j) != 0) { col = j; break; }
    }
    if (col >= 0) {
      tab.pivot(r, col);
      keep.push_back(r);
    }
    // else: zero row, redundant constraint; dropped below
  }
  if (static_cast<int>(keep.size()) != m) {
    MatQ t2(static_cast<int>(keep.size()), tab.t.cols());
    std::vector<int> b2;
    for (size_t i = 0; i < keep.size(); ++i) {
      t2.row(static_cast<int>(i)) = tab.t.row(keep[i]);
      b2.push_back(tab.basis[keep[i]]);
    }
    tab.t = t2;
    tab.basis = b2;
  }

  // Phase 2 on the original columns (artificials excluded by cost +inf proxy:
  // simply never let them re-enter by giving them zero cost and removing any
  // negative reduced cost among them).
  VecQ full_cost = VecQ::Zero(ncols + m);
  for (int j = 0; j < n; ++j) {
    full_cost(j) = c(j);
    full_cost(n + j) = -c(j);
  }
  tab.cost = full_cost;
  tab.obj = 0;
  for (int r = 0; r < tab.rows(); ++r) {
    int bv = tab.basis[r];
    if (full_cost(bv) == 0) continue;
    tab.obj += full_cost(bv) * tab.t(r, tab.cols());
    tab.cost -= (full_cost(bv) * tab.t.row(r).head(tab.cols())).transpose();
  }
  for (int j = ncols; j < ncols + m; ++j) tab.cost(j) = 0;  // keep artificials out

  st = tab.run();
  if (st == LpStatus::Unbounded) return {LpStatus::Unbounded, Rational(0), VecQ()};

  VecQ z = VecQ::Zero(ncols + m);
  for (int r = 0; r < tab.rows(); ++r) z(tab.basis[r]) = tab.t(r, tab.cols());
  VecQ x(n);
  for (int j = 0; j < n; ++j) x(j) = z(j) - z(n + j);
  return {LpStatus::Optimal, tab.obj, x};
}

bool lp_feasible(const MatQ& a, const VecQ& b) {
  VecQ c = VecQ::Zero(a.cols());
  return solve_lp(a, b, c).status == LpStatus::Optimal;
}

}  // namespace sasakit
