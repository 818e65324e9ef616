// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace fastrk {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using CRowVec = Eigen::RowVectorXcd;

/// Base class for all library-specific failures.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A shifted linear system (lambda*M + A)x = b could not be solved.
/// Carries the offending shift so callers can report which quadrature
/// node broke down.
struct SingularSystemError : Error {
  Complex lambda;
  explicit SingularSystemError(Complex lam, const std::string& detail = {})
      : Error("shifted solve failed at lambda = (" + std::to_string(lam.real()) +
              ", " + std::to_string(lam.imag()) + ")" +
              (detail.empty() ? "" : ": " + detail)),
        lambda(lam) {}
};

/// Invalid or inconsistent run configuration (CLI layer).
struct ConfigError : Error {
  using Error::Error;
};

/// Requested error bound is outside its admissible parameter range.
struct TheoremInapplicableError : Error {
  using Error::Error;
};

/// b^e for integer e >= 0 without going through floating point.
/// Overflow is the caller's problem; panel arithmetic stays well below 2^62.
constexpr std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  for (; e > 0; --e) r *= b;
  return r;
}

/// z^n by repeated squaring. Deterministic evaluation order, so results are
/// bit-identical across runs; std::pow on complex arguments is not.
inline Complex pow_int(Complex z, std::int64_t n) {
  Complex r = 1.0;
  for (; n > 0; n >>= 1) {
    if (n & 1) r *= z;
    z *= z;
  }
  return r;
}

}  // namespace fastrk
