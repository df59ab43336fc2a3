#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace sasakit {

/// Exact scalars for all cone and polytope combinatorics.  Incidence and
/// feasibility decisions are made in Q; binary64 enters only when a value is
/// handed to the numeric layer.
using Rational = boost::multiprecision::mpq_rational;
using Integer  = boost::multiprecision::mpz_int;

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using VecQ = Vec<Rational>;
using MatQ = Mat<Rational>;
using VecZ = Vec<Integer>;
using MatZ = Mat<Integer>;
using VecD = Eigen::VectorXd;
using MatD = Eigen::MatrixXd;

using BoolMat = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Failure conditions surfaced by the library.  The CLI maps these onto its
/// exit-code contract via exit_class().
enum class Errc {
  MalformedInput,
  NonPrimitiveNormal,
  RankDeficient,
  NotPointed,
  EmptyInterior,
  GammaInconsistent,
  NotOnSlice,
  NotInterior,
  Unbounded,
  LowerDimensional,
  NotFeasible,
  MaxIterations,
  NoConvergence,
  InconsistentInputs,
};

const char* errc_name(Errc c);

/// Exit-code class for the CLI contract: 1 = invalid input, 2 = geometric
/// infeasibility / inconsistency, 3 = numerical non-convergence.
int exit_class(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace sasakit
