// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <initializer_list>
#include <memory>
#include <vector>

#include "fastrk/types.hpp"

namespace fastrk {

/// Resolvent bound data for a sectorial operator:
///   ||(lambda*M + A)^{-1}|| <= m_const / |lambda - sigma|
/// for all lambda with |arg(lambda - sigma)| <= pi - phi. Contour placement
/// and the a-priori error bounds consume these numbers; nothing in the
/// solve path depends on them.
struct SectorialBounds {
  double m_const = 2.0;
  double sigma = 0.0;
  double phi = 0.0;
};

/// Positive-semidefinite operators admit sigma = 0 and m_const = 1/sin(phi)
/// for any phi in (0, pi/2). The default half-angle is deliberately small so
/// that wide integration contours stay admissible.
SectorialBounds spd_bounds(double phi = 0.2617993877991494 /* pi/12 */);

/// A spatial operator A (optionally paired with an SPD mass matrix M)
/// exposed through the one interface the evaluation algorithms need:
/// solving (lambda*M + A)x = rhs for arbitrary complex shifts.
///
/// Implementations factor once per distinct shift and cache; repeated solves
/// at the same lambda reuse the factorization. solve() is safe to call
/// concurrently and every call bumps an atomic counter, which the step
/// algorithms reconcile against their predicted complexity.
class ShiftedSolver {
 public:
  virtual ~ShiftedSolver() = default;

  Eigen::Index dimension() const { return dim_; }
  bool has_mass() const { return has_mass_; }
  const SectorialBounds& bounds() const { return bounds_; }

  /// Solves (lambda*M + A)x = rhs. Throws SingularSystemError (carrying
  /// lambda) when the factorization breaks down.
  CVec solve(Complex lambda, const CVec& rhs) const;

  /// y = A v.
  virtual CVec apply(const CVec& v) const = 0;
  Vec apply(const Vec& v) const { return apply(CVec(v.cast<Complex>())).real(); }

  /// y = M v; identity when has_mass() is false.
  virtual CVec apply_mass(const CVec& v) const { return v; }
  Vec apply_mass(const Vec& v) const {
    return apply_mass(CVec(v.cast<Complex>())).real();
  }

  long solve_count() const { return count_.load(std::memory_order_relaxed); }
  void reset_solve_count() { count_.store(0, std::memory_order_relaxed); }

 protected:
  ShiftedSolver(Eigen::Index dim, SectorialBounds bounds, bool has_mass)
      : dim_(dim), bounds_(bounds), has_mass_(has_mass) {}

  virtual CVec solve_impl(Complex lambda, const CVec& rhs) const = 0;

 private:
  Eigen::Index dim_;
  SectorialBounds bounds_;
  bool has_mass_;
  mutable std::atomic<long> count_{0};
};

/// A = diag(entries). Entries may be any reals; bounds are the caller's
/// claim about them.
std::unique_ptr<ShiftedSolver> make_diagonal(Vec entries,
                                             SectorialBounds bounds = spd_bounds());

/// Dense A with LU-factored shifted solves. No symmetry assumed, so the
/// sectorial bounds must come from the caller.
std::unique_ptr<ShiftedSolver> make_dense(Mat a, SectorialBounds bounds);

/// Tridiagonal A given by its three diagonals (lower/upper have size n-1).
/// Solved by elimination with row pivoting, O(n) per call.
std::unique_ptr<ShiftedSolver> make_tridiagonal(Vec lower, Vec diag, Vec upper,
                                                SectorialBounds bounds = spd_bounds());

/// Generalized pair (A, M): solves (lambda*M + A)x = rhs densely. M must be
/// symmetric positive definite; construction verifies this via Cholesky.
std::unique_ptr<ShiftedSolver> make_mass_pair(Mat a, Mat m,
                                              SectorialBounds bounds);

/// Finite-volume Laplacian on a cell-centered nx x ny grid over a
/// lx x ly rectangle, with a Robin condition (outward flux rho*u) on the
/// outer boundary. Cells listed in the hole mask are removed from the
/// unknowns; faces between an active cell and a hole are insulated
/// (zero flux). The operator is symmetric positive semidefinite, definite
/// for rho > 0.
class Grid2dRobinSolver : public ShiftedSolver {
 public:
  enum class Side { Left, Right, Bottom, Top };

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double dx() const { return dx_; }
  double dy() const { return dy_; }
  double rho() const { return rho_; }

  /// Unknown index of cell (ix, iy), or -1 for holes.
  virtual int cell_index(int ix, int iy) const = 0;

  /// Per-unknown coefficient vector F with F_i = sum of 1/h_face over the
  /// outer-boundary faces of cell i lying on the given sides. An inflow
  /// forcing beta(t) across those faces enters the equation as g(t) =
  /// beta(t) * F, so the support of F is exactly the support of g.
  virtual Vec flux_load(std::initializer_list<Side> sides) const = 0;

 protected:
  Grid2dRobinSolver(Eigen::Index dim, int nx, int ny, double lx, double ly,
                    double rho, SectorialBounds bounds)
      : ShiftedSolver(dim, bounds, false),
        nx_(nx), ny_(ny), dx_(lx / nx), dy_(ly / ny), rho_(rho) {}

  int nx_, ny_;
  double dx_, dy_;
  double rho_;
};

std::unique_ptr<Grid2dRobinSolver> make_grid2d_robin(
    int nx, int ny, double lx, double ly, double rho,
    const std::vector<bool>& holes = {}, SectorialBounds bounds = spd_bounds());

}  // namespace fastrk
