#include "sasakit/rational.hpp"

#include <cmath>
#include <sstream>

namespace sasakit {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::MalformedInput: return "MalformedInput";
    case Errc::NonPrimitiveNormal: return "NonPrimitiveNormal";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::NotPointed: return "NotPointed";
    case Errc::EmptyInterior: return "EmptyInterior";
    case Errc::GammaInconsistent: return "GammaInconsistent";
    case Errc::NotOnSlice: return "NotOnSlice";
    case Errc::NotInterior: return "NotInterior";
    case Errc::Unbounded: return "Unbounded";
    case Errc::LowerDimensional: return "LowerDimensional";
    case Errc::NotFeasible: return "NotFeasible";
    case Errc::MaxIterations: return "MaxIterations";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::InconsistentInputs: return "InconsistentInputs";
  }
  return "UnknownError";
}

int exit_class(Errc c) {
  switch (c) {
    case Errc::MalformedInput:
    case Errc::NonPrimitiveNormal:
    case Errc::RankDeficient:
    case Errc::NotPointed:
    case Errc::EmptyInterior:
    case Errc::Unbounded:
    case Errc::LowerDimensional:
    case Errc::InconsistentInputs:
      return 1;
    case Errc::GammaInconsistent:
    case Errc::NotOnSlice:
    case Errc::NotInterior:
    case Errc::NotFeasible:
      return 2;
    case Errc::MaxIterations:
    case Errc::NoConvergence:
      return 3;
  }
  return 1;
}

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) fail(Errc::MalformedInput, "non-finite value cannot be rationalized");
  return Rational(x);  // mpq_set_d is exact
}

VecQ rationalize(const VecD& v) {
  VecQ out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = rational_from_double(v(i));
  return out;
}

MatQ rationalize(const MatD& a) {
  MatQ out(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out(i, j) = rational_from_double(a(i, j));
  return out;
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

VecD to_double(const VecQ& v) {
  VecD out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = to_double(v(i));
  return out;
}

MatD to_double(const MatQ& a) {
  MatD out(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out(i, j) = to_double(a(i, j));
  return out;
}

VecD to_double(const VecZ& v) {
  VecD out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = v(i).convert_to<double>();
  return out;
}

MatD to_double(const MatZ& a) {
  MatD out(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out(i, j) = a(i, j).convert_to<double>();
  return out;
}

VecQ to_rational(const VecZ& v) {
  VecQ out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = Rational(v(i));
  return out;
}

MatQ to_rational(const MatZ& a) {
  MatQ out(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out(i, j) = Rational(a(i, j));
  return out;
}

Integer vec_gcd(const VecZ& v) {
  Integer g = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) g = gcd(g, abs(v(i)));
  return g;
}

VecZ primitive_ray(const VecQ& v) {
  Integer scale = 1;
  for (Eigen::Index i = 0; i < v.size(); ++i) scale = lcm(scale, denominator(v(i)));
  VecZ w(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) w(i) = numerator(Rational(v(i) * scale));
  Integer g = vec_gcd(w);
  if (g == 0) fail(Errc::MalformedInput, "zero vector has no primitive representative");
  for (Eigen::Index i = 0; i < w.size(); ++i) w(i) /= g;
  return w;
}

VecZ primitive_line(const VecQ& v) {
  VecZ w = primitive_ray(v);
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w(i) != 0) {
      if (w(i) < 0) w = -w;
      break;
    }
  }
  return w;
}

Integer lcm_of_denominators(const VecQ& v) {
  Integer out = 1;
  for (Eigen::Index i = 0; i < v.size(); ++i) out = lcm(out, denominator(v(i)));
  return out;
}

Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash != std::string::npos) {
      Integer num(s.substr(0, slash));
      Integer den(s.substr(slash + 1));
      if (den == 0) fail(Errc::MalformedInput, "zero denominator in '" + s + "'");
      return Rational(num, den);
    }
    if (s.find_first_of(".eE") != std::string::npos) {
      size_t pos = 0;
      double x = std::stod(s, &pos);
      if (pos != s.size()) fail(Errc::MalformedInput, "trailing characters in '" + s + "'");
      return rational_from_double(x);
    }
    return Rational(Integer(s));
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    fail(Errc::MalformedInput, "cannot parse rational '" + s + "'");
  }
}

std::string to_string(const Rational& q) {
  std::ostringstream os;
  os << q;
  return os.str();
}

RationalApprox reconstruct_rational(double x, const Integer& den_bound, double tol,
                                    double anomaly) {
  RationalApprox out;
  const Rational target = rational_from_double(x);
  const Rational tol_q = rational_from_double(tol);
  const Rational anomaly_q = rational_from_double(anomaly);

  Rational cur = target;
  Integer p = 0, q = 1, pp = 1, qq = 0;  // convergent and its predecessor
  for (int guard = 0; guard < 512; ++guard) {
    Integer a = numerator(cur) / denominator(cur);
    if (cur < 0 && a * denominator(cur) != numerator(cur)) a -= 1;  // floor
    Integer pn = a * p + pp, qn = a * q + qq;
    pp = p; qq = q; p = pn; q = qn;
    if (q > den_bound) return out;

    Rational frac = cur - Rational(a);
    Rational err = abs(target - Rational(p, q));
    if (frac == 0) {
      if (err <= tol_q) { out.ok = true; out.num = p; out.den = q; }
      return out;
    }
    Rational next = 1 / frac;
    if (err <= tol_q && next >= anomaly_q) {
      out.ok = true; out.num = p; out.den = q;
      return out;
    }
    cur = next;
  }
  return out;
}

}  // namespace sasakit
