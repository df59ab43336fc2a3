#pragma once

#include "sasakit/types.hpp"

namespace sasakit {

/// Exact conversion: every binary64 value is a dyadic rational.
Rational rational_from_double(double x);

VecQ rationalize(const VecD& v);
MatQ rationalize(const MatD& a);

double to_double(const Rational& q);
VecD to_double(const VecQ& v);
MatD to_double(const MatQ& a);
VecD to_double(const VecZ& v);
MatD to_double(const MatZ& a);

VecQ to_rational(const VecZ& v);
MatQ to_rational(const MatZ& a);

/// gcd of the absolute values of the entries; 0 for the zero vector.
Integer vec_gcd(const VecZ& v);

/// Scale a nonzero rational vector to the primitive integer vector on the
/// same ray (clears denominators, divides out the content; orientation kept).
VecZ primitive_ray(const VecQ& v);

/// Primitive integer vector on the same *line*, sign fixed so the first
/// nonzero entry is positive.
VecZ primitive_line(const VecQ& v);

Integer lcm_of_denominators(const VecQ& v);

/// Parse "p/q" or a decimal literal into an exact rational.
Rational parse_rational(const std::string& s);

std::string to_string(const Rational& q);

struct RationalApprox {
  bool ok = false;
  Integer num;
  Integer den;
};

/// Continued-fraction rational reconstruction of a binary64 value.
///
/// Walks the exact convergents of x.  A convergent p/q is accepted as the
/// reconstructed value when q <= den_bound, |x - p/q| <= tol, and the
/// expansion either terminates there or the next partial quotient is at
/// least `anomaly` (the signature of a near-exact match swamped by noise).
/// A plain "some rational lies within tol" test would be satisfied by the
/// ordinary convergents of any irrational, so the anomaly certificate is
/// what separates recovered rationals from good generic approximations.
RationalApprox reconstruct_rational(double x, const Integer& den_bound, double tol,
                                    double anomaly = 1e7);

}  // namespace sasakit
