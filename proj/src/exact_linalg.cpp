#include "sasakit/exact_linalg.hpp"

#include <boost/multiprecision/integer.hpp>

namespace sasakit {

namespace {

// Fraction-free forward elimination; returns pivot columns. `a` is modified.
std::vector<int> eliminate(MatQ& a) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < a.cols() && row < a.rows(); ++col) {
    int piv = -1;
    for (int r = row; r < a.rows(); ++r) {
      if (a(r, col) != 0) { piv = r; break; }
    }
    if (piv < 0) continue;
    if (piv != row) a.row(piv).swap(a.row(row));
    for (int r = 0; r < a.rows(); ++r) {
      if (r == row || a(r, col) == 0) continue;
      Rational f = a(r, col) / a(row, col);
      a.row(r) -= f * a.row(row);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

int rank_q(MatQ a) { return static_cast<int>(eliminate(a).size()); }

Rational det_q(MatQ a) {
  if (a.rows() != a.cols()) fail(Errc::MalformedInput, "determinant of non-square matrix");
  const int n = static_cast<int>(a.rows());
  Rational det = 1;
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r) {
      if (a(r, col) != 0) { piv = r; break; }
    }
    if (piv < 0) return Rational(0);
    if (piv != col) {
      a.row(piv).swap(a.row(col));
      det = -det;
    }
    det *= a(col, col);
    for (int r = col + 1; r < n; ++r) {
      if (a(r, col) == 0) continue;
      Rational f = a(r, col) / a(col, col);
      a.row(r) -= f * a.row(col);
    }
  }
  return det;
}

LinSolveQ solve_exact(const MatQ& a, const VecQ& b) {
  LinSolveQ out;
  const int n = static_cast<int>(a.cols());
  MatQ aug(a.rows(), n + 1);
  aug.leftCols(n) = a;
  aug.col(n) = b;
  std::vector<int> pivots = eliminate(aug);
  // Any pivot in the rhs column means inconsistency.
  for (int c : pivots) {
    if (c == n) return out;
  }
  if (static_cast<int>(pivots.size()) != n)
    fail(Errc::RankDeficient, "solve_exact requires full column rank");
  out.x = VecQ::Zero(n);
  for (int r = 0; r < static_cast<int>(pivots.size()); ++r)
    out.x(pivots[r]) = aug(r, n) / aug(r, pivots[r]);
  // Verify every row (rows beyond the pivot count must have zero residual).
  for (int r = 0; r < a.rows(); ++r) {
    if (a.row(r) * out.x != b(r)) return out;
  }
  out.consistent = true;
  return out;
}

MatQ nullspace_q(const MatQ& a) {
  MatQ red = a;
  std::vector<int> pivots = eliminate(red);
  const int n = static_cast<int>(a.cols());
  std::vector<bool> is_pivot(n, false);
  for (int c : pivots) is_pivot[c] = true;
  MatQ basis(n, n - static_cast<int>(pivots.size()));
  int k = 0;
  for (int free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    VecQ v = VecQ::Zero(n);
    v(free) = 1;
    for (int r = 0; r < static_cast<int>(pivots.size()); ++r)
      v(pivots[r]) = -red(r, free) / red(r, pivots[r]);
    basis.col(k++) = v;
  }
  return basis;
}

MatZ integer_kernel_basis(const VecZ& g) {
  const int n = static_cast<int>(g.size());
  if (n < 2) fail(Errc::MalformedInput, "kernel basis needs dimension >= 2");
  VecZ w = g;
  MatZ u = MatZ::Identity(n, n);
  // Fold each later entry into the first by extended-gcd column operations.
  for (int j = 1; j < n; ++j) {
    if (w(j) == 0) continue;
    Integer s, t;
    Integer d = boost::multiprecision::gcd(w(0), w(j));
    if (w(0) == 0) {
      u.col(0).swap(u.col(j));
      std::swap(w(0), w(j));
      continue;
    }
    // Extended gcd: s*w0 + t*wj = d.
    {
      Integer a = w(0), b = w(j);
      Integer x0 = 1, x1 = 0, y0 = 0, y1 = 1;
      while (b != 0) {
        Integer qt = a / b;
        Integer r = a - qt * b;
        a = b; b = r;
        Integer nx = x0 - qt * x1; x0 = x1; x1 = nx;
        Integer ny = y0 - qt * y1; y0 = y1; y1 = ny;
      }
      if (a < 0) { a = -a; x0 = -x0; y0 = -y0; }
      d = a; s = x0; t = y0;
    }
    Integer w0_d = w(0) / d, wj_d = w(j) / d;
    VecZ c0 = u.col(0), cj = u.col(j);
    u.col(0) = s * c0 + t * cj;
    u.col(j) = -wj_d * c0 + w0_d * cj;
    w(0) = d;
    w(j) = 0;
  }
  if (w(0) == 0) fail(Errc::MalformedInput, "kernel basis of the zero vector");
  return u.rightCols(n - 1);
}

}  // namespace sasakit
