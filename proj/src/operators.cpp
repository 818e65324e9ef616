// SPDX-License-Identifier: Apache-2.0
#include "fastrk/operators.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <stdexcept>
#include <unordered_map>
#include <utility>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

namespace fastrk {

SectorialBounds spd_bounds(double phi) {
  if (!(phi > 0.0 && phi < 1.5707963267948966))
    throw std::invalid_argument("spd_bounds: phi must lie in (0, pi/2)");
  return {1.0 / std::sin(phi), 0.0, phi};
}

CVec ShiftedSolver::solve(Complex lambda, const CVec& rhs) const {
  if (rhs.size() != dim_)
    throw std::invalid_argument("ShiftedSolver::solve: rhs dimension");
  count_.fetch_add(1, std::memory_order_relaxed);
  CVec x = solve_impl(lambda, rhs);
  if (!x.allFinite()) throw SingularSystemError(lambda, "non-finite solution");
  return x;
}

namespace {

/// Shift cache key on exact bit patterns; contour nodes are reproduced
/// bit-identically between planning and execution.
struct ShiftKey {
  std::uint64_t re, im;
  bool operator==(const ShiftKey&) const = default;
};

struct ShiftKeyHash {
  std::size_t operator()(const ShiftKey& k) const {
    auto mix = [](std::uint64_t x) {
      x += 0x9e3779b97f4a7c15ULL;
      x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
      x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
      return x ^ (x >> 31);
    };
    return static_cast<std::size_t>(mix(mix(k.re) + k.im));
  }
};

ShiftKey key_of(Complex lambda) {
  return {std::bit_cast<std::uint64_t>(lambda.real()),
          std::bit_cast<std::uint64_t>(lambda.imag())};
}

class DiagonalSolver final : public ShiftedSolver {
 public:
  DiagonalSolver(Vec d, SectorialBounds bounds)
      : ShiftedSolver(d.size(), bounds, false), d_(std::move(d)) {}

  CVec apply(const CVec& v) const override {
    return d_.cast<Complex>().cwiseProduct(v);
  }

 private:
  CVec solve_impl(Complex lambda, const CVec& rhs) const override {
    CVec x(rhs.size());
    for (Eigen::Index i = 0; i < rhs.size(); ++i) {
      const Complex den = lambda + d_(i);
      if (std::abs(den) < 1e-300)
        throw SingularSystemError(lambda, "shift cancels a diagonal entry");
      x(i) = rhs(i) / den;
    }
    return x;
  }

  Vec d_;
};

class DenseSolver : public ShiftedSolver {
 public:
  DenseSolver(Mat a, Mat mass, SectorialBounds bounds, bool has_mass)
      : ShiftedSolver(a.rows(), bounds, has_mass),
        a_(std::move(a)),
        mass_(std::move(mass)) {
    if (a_.rows() != a_.cols())
      throw std::invalid_argument("dense operator must be square");
    if (has_mass) {
      if (mass_.rows() != a_.rows() || mass_.cols() != a_.cols())
        throw std::invalid_argument("mass matrix dimension mismatch");
      if ((mass_ - mass_.transpose()).norm() > 1e-12 * mass_.norm())
        throw std::invalid_argument("mass matrix must be symmetric");
      Eigen::LLT<Mat> llt(mass_);
      if (llt.info() != Eigen::Success)
        throw std::invalid_argument("mass matrix must be positive definite");
    }
  }

  CVec apply(const CVec& v) const override { return a_.cast<Complex>() * v; }

  CVec apply_mass(const CVec& v) const override {
    return has_mass() ? CVec(mass_.cast<Complex>() * v) : v;
  }

 private:
  CVec solve_impl(Complex lambda, const CVec& rhs) const override {
    return factorization(lambda)->solve(rhs);
  }

  const Eigen::PartialPivLU<CMat>* factorization(Complex lambda) const {
    const ShiftKey key = key_of(lambda);
    std::lock_guard lock(mu_);
    auto& slot = cache_[key];
    if (!slot) {
      CMat sys = a_.cast<Complex>();
      if (has_mass())
        sys += lambda * mass_.cast<Complex>();
      else
        sys.diagonal().array() += lambda;
      auto lu = std::make_unique<Eigen::PartialPivLU<CMat>>(sys);
      const Vec pivots = lu->matrixLU().diagonal().cwiseAbs();
      if (pivots.minCoeff() <= 1e-14 * std::max(1e-300, pivots.maxCoeff())) {
        cache_.erase(key);
        throw SingularSystemError(lambda, "singular shifted system");
      }
      slot = std::move(lu);
    }
    return slot.get();
  }

  Mat a_;
  Mat mass_;
  mutable std::mutex mu_;
  mutable std::unordered_map<ShiftKey, std::unique_ptr<Eigen::PartialPivLU<CMat>>,
                             ShiftKeyHash>
      cache_;
};

class TridiagonalSolver final : public ShiftedSolver {
 public:
  TridiagonalSolver(Vec lower, Vec diag, Vec upper, SectorialBounds bounds)
      : ShiftedSolver(diag.size(), bounds, false),
        lower_(std::move(lower)),
        diag_(std::move(diag)),
        upper_(std::move(upper)) {
    if (lower_.size() != diag_.size() - 1 || upper_.size() != diag_.size() - 1)
      throw std::invalid_argument("tridiagonal band sizes must be n-1");
  }

  CVec apply(const CVec& v) const override {
    const Eigen::Index n = dimension();
    CVec y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      Complex s = diag_(i) * v(i);
      if (i > 0) s += lower_(i - 1) * v(i - 1);
      if (i + 1 < n) s += upper_(i) * v(i + 1);
      y(i) = s;
    }
    return y;
  }

 private:
  // Elimination with adjacent-row pivoting; the swap can introduce one
  // second-superdiagonal fill entry per column, stored in dl.
  CVec solve_impl(Complex lambda, const CVec& rhs) const override {
    const Eigen::Index n = dimension();
    CVec dl = lower_.cast<Complex>();
    CVec d = diag_.cast<Complex>();
    d.array() += lambda;
    CVec du = upper_.cast<Complex>();
    CVec b = rhs;

    for (Eigen::Index k = 0; k + 1 < n; ++k) {
      if (std::abs(d(k)) >= std::abs(dl(k))) {
        if (std::abs(d(k)) < 1e-300)
          throw SingularSystemError(lambda, "tridiagonal breakdown");
        const Complex mult = dl(k) / d(k);
        d(k + 1) -= mult * du(k);
        b(k + 1) -= mult * b(k);
        if (k + 2 < n) dl(k) = 0.0;
      } else {
        const Complex mult = d(k) / dl(k);
        d(k) = dl(k);
        const Complex temp = d(k + 1);
        d(k + 1) = du(k) - mult * temp;
        if (k + 2 < n) {
          dl(k) = du(k + 1);
          du(k + 1) = -mult * dl(k);
        }
        du(k) = temp;
        const Complex tb = b(k);
        b(k) = b(k + 1);
        b(k + 1) = tb - mult * b(k + 1);
      }
    }
    if (std::abs(d(n - 1)) < 1e-300)
      throw SingularSystemError(lambda, "tridiagonal breakdown");

    b(n - 1) /= d(n - 1);
    if (n > 1) b(n - 2) = (b(n - 2) - du(n - 2) * b(n - 1)) / d(n - 2);
    for (Eigen::Index k = n - 3; k >= 0; --k)
      b(k) = (b(k) - du(k) * b(k + 1) - dl(k) * b(k + 2)) / d(k);
    return b;
  }

  Vec lower_, diag_, upper_;
};

using SparseC = Eigen::SparseMatrix<Complex>;

class Grid2dImpl final : public Grid2dRobinSolver {
 public:
  Grid2dImpl(int nx, int ny, double lx, double ly, double rho,
             std::vector<bool> holes, SectorialBounds bounds)
      : Grid2dRobinSolver(active_count(nx, ny, holes), nx, ny, lx, ly, rho,
                          bounds),
        holes_(std::move(holes)) {
    build();
  }

  int cell_index(int ix, int iy) const override {
    if (ix < 0 || ix >= nx_ || iy < 0 || iy >= ny_) return -1;
    return index_[static_cast<std::size_t>(iy) * nx_ + ix];
  }

  Vec flux_load(std::initializer_list<Side> sides) const override {
    Vec f = Vec::Zero(dimension());
    for (int iy = 0; iy < ny_; ++iy)
      for (int ix = 0; ix < nx_; ++ix) {
        const int i = cell_index(ix, iy);
        if (i < 0) continue;
        for (const Side side : sides) {
          switch (side) {
            case Side::Left:   if (ix == 0)       f(i) += 1.0 / dx_; break;
            case Side::Right:  if (ix == nx_ - 1) f(i) += 1.0 / dx_; break;
            case Side::Bottom: if (iy == 0)       f(i) += 1.0 / dy_; break;
            case Side::Top:    if (iy == ny_ - 1) f(i) += 1.0 / dy_; break;
          }
        }
      }
    return f;
  }

  CVec apply(const CVec& v) const override { return ac_ * v; }

 private:
  static Eigen::Index active_count(int nx, int ny, const std::vector<bool>& holes) {
    if (nx < 1 || ny < 1)
      throw std::invalid_argument("grid dimensions must be positive");
    if (!holes.empty() && holes.size() != static_cast<std::size_t>(nx) * ny)
      throw std::invalid_argument("hole mask must have nx*ny entries");
    Eigen::Index n = 0;
    for (std::size_t c = 0; c < static_cast<std::size_t>(nx) * ny; ++c)
      if (holes.empty() || !holes[c]) ++n;
    return n;
  }

  bool hole(int ix, int iy) const {
    return !holes_.empty() && holes_[static_cast<std::size_t>(iy) * nx_ + ix];
  }

  void build() {
    index_.assign(static_cast<std::size_t>(nx_) * ny_, -1);
    int next = 0;
    for (int iy = 0; iy < ny_; ++iy)
      for (int ix = 0; ix < nx_; ++ix)
        if (!hole(ix, iy))
          index_[static_cast<std::size_t>(iy) * nx_ + ix] = next++;

    const double wx = 1.0 / (dx_ * dx_), wy = 1.0 / (dy_ * dy_);
    std::vector<Eigen::Triplet<Complex>> trip;
    trip.reserve(static_cast<std::size_t>(dimension()) * 5);
    for (int iy = 0; iy < ny_; ++iy)
      for (int ix = 0; ix < nx_; ++ix) {
        const int i = cell_index(ix, iy);
        if (i < 0) continue;
        double diag = 0.0;
        const auto edge = [&](int jx, int jy, double w, double hface) {
          if (jx < 0 || jx >= nx_ || jy < 0 || jy >= ny_) {
            diag += rho_ / hface;  // outer face: Robin outflow rho*u
          } else if (const int j = cell_index(jx, jy); j >= 0) {
            diag += w;
            trip.emplace_back(i, j, Complex(-w));
          }
          // faces toward holes are insulated: no contribution
        };
        edge(ix - 1, iy, wx, dx_);
        edge(ix + 1, iy, wx, dx_);
        edge(ix, iy - 1, wy, dy_);
        edge(ix, iy + 1, wy, dy_);
        trip.emplace_back(i, i, Complex(diag));
      }

    ac_.resize(dimension(), dimension());
    ac_.setFromTriplets(trip.begin(), trip.end());
    ac_.makeCompressed();
  }

  CVec solve_impl(Complex lambda, const CVec& rhs) const override {
    return factorization(lambda)->solve(rhs);
  }

  const Eigen::SparseLU<SparseC>* factorization(Complex lambda) const {
    const ShiftKey key = key_of(lambda);
    std::lock_guard lock(mu_);
    auto& slot = cache_[key];
    if (!slot) {
      SparseC sys = ac_;  // diagonal entries are structurally present
      for (Eigen::Index i = 0; i < dimension(); ++i) sys.coeffRef(i, i) += lambda;
      auto lu = std::make_unique<Eigen::SparseLU<SparseC>>();
      lu->compute(sys);
      if (lu->info() != Eigen::Success) {
        cache_.erase(key);
        throw SingularSystemError(lambda, "sparse factorization failed");
      }
      slot = std::move(lu);
    }
    return slot.get();
  }

  std::vector<bool> holes_;
  std::vector<int> index_;
  SparseC ac_;
  mutable std::mutex mu_;
  mutable std::unordered_map<ShiftKey, std::unique_ptr<Eigen::SparseLU<SparseC>>,
                             ShiftKeyHash>
      cache_;
};

}  // namespace

std::unique_ptr<ShiftedSolver> make_diagonal(Vec entries, SectorialBounds bounds) {
  return std::make_unique<DiagonalSolver>(std::move(entries), bounds);
}

std::unique_ptr<ShiftedSolver> make_dense(Mat a, SectorialBounds bounds) {
  return std::make_unique<DenseSolver>(std::move(a), Mat(), bounds, false);
}

std::unique_ptr<ShiftedSolver> make_tridiagonal(Vec lower, Vec diag, Vec upper,
                                                SectorialBounds bounds) {
  return std::make_unique<TridiagonalSolver>(std::move(lower), std::move(diag),
                                             std::move(upper), bounds);
}

std::unique_ptr<ShiftedSolver> make_mass_pair(Mat a, Mat m,
                                              SectorialBounds bounds) {
  return std::make_unique<DenseSolver>(std::move(a), std::move(m), bounds, true);
}

std::unique_ptr<Grid2dRobinSolver> make_grid2d_robin(int nx, int ny, double lx,
                                                     double ly, double rho,
                                                     const std::vector<bool>& holes,
                                                     SectorialBounds bounds) {
  if (lx <= 0.0 || ly <= 0.0)
    throw std::invalid_argument("grid extents must be positive");
  if (rho < 0.0) throw std::invalid_argument("rho must be nonnegative");
  return std::make_unique<Grid2dImpl>(nx, ny, lx, ly, rho, holes, bounds);
}

}  // namespace fastrk
