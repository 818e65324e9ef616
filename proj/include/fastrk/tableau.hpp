// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>

#include "fastrk/types.hpp"

namespace fastrk {

class ShiftedSolver;

enum class TableauKind { ImplicitEuler, RadauIIA2, RadauIIA3 };

/// Complex eigendecomposition of inv(A) for an implicit Runge-Kutta
/// coefficient matrix A, precomputed once per tableau. Decouples the m
/// coupled stage equations of one step into m independent shifted solves
/// (lambda_i/h * M + Op) w_i = rhs_i.
struct StageDecoupling {
  CVec lambda;           ///< eigenvalues of inv(A)
  CMat s;                ///< eigenvectors, inv(A) = s * diag(lambda) * s_inv
  CMat s_inv;
  CVec s_inv_ainv_one;   ///< s_inv * inv(A) * ones
  Eigen::RowVectorXd update;  ///< b^T * inv(A), the step-update weights
};

/// Coefficients of an L-stable implicit Runge-Kutta method together with
/// derived quantities needed by the fast evaluation path.
///
/// All supported methods are stiffly accurate (last row of A equals b^T)
/// and have r(infinity) = 0, which the panel recombination relies on.
class Tableau {
 public:
  static Tableau make(TableauKind kind);

  TableauKind kind() const { return kind_; }
  int stages() const { return static_cast<int>(b_.size()); }
  const Mat& a() const { return a_; }
  const Vec& b() const { return b_; }
  const Vec& c() const { return c_; }

  /// Cached stage-decoupling data; throws Error at construction when the
  /// coefficient matrix is not diagonalizable.
  const StageDecoupling& decoupling() const { return dec_; }

  /// Classical order of the method (1, 3 or 5).
  int order() const;

  const char* name() const;

 private:
  Tableau(TableauKind kind, Mat a, Vec b, Vec c);

  TableauKind kind_;
  Mat a_;
  Vec b_;
  Vec c_;
  StageDecoupling dec_;
};

/// Stability function r(z) = 1 + z b^T (I - zA)^{-1} ones and weight row
/// q(z) = b^T (I - zA)^{-1}, evaluated together from one m x m LU.
struct RationalPair {
  Complex r;
  CRowVec q;
};

/// Throws SingularSystemError when z hits a pole of r (z A has eigenvalue 1).
RationalPair eval_rq(const Tableau& tab, Complex z);

/// Stage samples of the inhomogeneity for one step: row i holds
/// g(t_j + c_i h) restricted to whatever index set the caller uses.
using StageMatrix = Mat;

/// Callback producing the stage matrix for step j. Called exactly once per
/// step, in increasing j, so implementations may stream or cache.
using StageProvider = std::function<StageMatrix(int)>;

/// Runs the scalar one-step recurrence y <- r(h lambda) y + h q(h lambda) G_j
/// over steps j in [j_begin, j_end), starting from y = 0. This is the exact
/// discrete variation-of-constants sum
///   y = h sum_j r(h lambda)^{j_end-1-j} q(h lambda) G_j
/// for the scalar problem with coefficient -lambda.
CVec scalar_panel_integrate(const Tableau& tab, Complex lambda, double h,
                            const StageProvider& stages, int j_begin, int j_end,
                            Eigen::Index dim);

/// Advances n_steps Runge-Kutta steps of M u' + Op u = g from u_start at
/// time t_start, solving the stage systems through the decoupled shifted
/// form. Issues exactly stages() solver calls per step. M is the identity
/// for plain operators.
Vec direct_operator_steps(const Tableau& tab, ShiftedSolver& solver, double h,
                          const std::function<Vec(double)>& g,
                          const Vec& u_start, int n_steps,
                          double t_start = 0.0);

}  // namespace fastrk
