// SPDX-License-Identifier: Apache-2.0
#include "fastrk/tableau.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "fastrk/operators.hpp"

namespace fastrk {

namespace {

StageDecoupling make_decoupling(const Mat& a, const Vec& b) {
  const Eigen::Index m = a.rows();
  const Mat ainv = a.inverse();

  Eigen::EigenSolver<Mat> es(ainv);
  if (es.info() != Eigen::Success)
    throw Error("stage matrix eigendecomposition failed");

  StageDecoupling dec;
  dec.lambda = es.eigenvalues();
  dec.s = es.eigenvectors();

  Eigen::JacobiSVD<CMat> svd(dec.s);
  if (svd.singularValues()(m - 1) < 1e-8 * svd.singularValues()(0))
    throw Error("stage matrix is not diagonalizable");

  dec.s_inv = dec.s.inverse();
  dec.s_inv_ainv_one = dec.s_inv * CVec((ainv * Vec::Ones(m)).cast<Complex>());
  dec.update = b.transpose() * ainv;
  return dec;
}

}  // namespace

Tableau::Tableau(TableauKind kind, Mat a, Vec b, Vec c)
    : kind_(kind),
      a_(std::move(a)),
      b_(std::move(b)),
      c_(std::move(c)),
      dec_(make_decoupling(a_, b_)) {}

Tableau Tableau::make(TableauKind kind) {
  switch (kind) {
    case TableauKind::ImplicitEuler: {
      Mat a(1, 1);
      a << 1.0;
      Vec b(1), c(1);
      b << 1.0;
      c << 1.0;
      return Tableau(kind, a, b, c);
    }
    case TableauKind::RadauIIA2: {
      Mat a(2, 2);
      a << 5.0 / 12.0, -1.0 / 12.0,
           3.0 / 4.0,   1.0 / 4.0;
      Vec b(2), c(2);
      b << 3.0 / 4.0, 1.0 / 4.0;
      c << 1.0 / 3.0, 1.0;
      return Tableau(kind, a, b, c);
    }
    case TableauKind::RadauIIA3: {
      // Classical 3-stage Radau IIA collocation coefficients
      // (Hairer & Wanner, Solving ODEs II, Table IV.5.6).
      const double s6 = std::sqrt(6.0);
      Mat a(3, 3);
      a << (88.0 - 7.0 * s6) / 360.0, (296.0 - 169.0 * s6) / 1800.0,
               (-2.0 + 3.0 * s6) / 225.0,
           (296.0 + 169.0 * s6) / 1800.0, (88.0 + 7.0 * s6) / 360.0,
               (-2.0 - 3.0 * s6) / 225.0,
           (16.0 - s6) / 36.0, (16.0 + s6) / 36.0, 1.0 / 9.0;
      Vec b(3), c(3);
      b << (16.0 - s6) / 36.0, (16.0 + s6) / 36.0, 1.0 / 9.0;
      c << (4.0 - s6) / 10.0, (4.0 + s6) / 10.0, 1.0;
      return Tableau(kind, a, b, c);
    }
  }
  throw std::invalid_argument("unknown tableau kind");
}

int Tableau::order() const {
  switch (kind_) {
    case TableauKind::ImplicitEuler: return 1;
    case TableauKind::RadauIIA2: return 3;
    case TableauKind::RadauIIA3: return 5;
  }
  return 0;
}

const char* Tableau::name() const {
  switch (kind_) {
    case TableauKind::ImplicitEuler: return "implicit-euler";
    case TableauKind::RadauIIA2: return "radau-iia-2";
    case TableauKind::RadauIIA3: return "radau-iia-3";
  }
  return "?";
}

RationalPair eval_rq(const Tableau& tab, Complex z) {
  const int m = tab.stages();
  // Factor (I - zA)^T once; q solves the transposed system and r follows
  // from r(z) = 1 + z * sum(q).
  CMat sys = CMat::Identity(m, m) - z * tab.a().transpose().cast<Complex>();
  Eigen::PartialPivLU<CMat> lu(sys);

  const Complex det = lu.determinant();
  const double scale = std::max(1.0, std::pow(sys.norm(), m));
  if (!std::isfinite(std::abs(det)) || std::abs(det) < 1e-14 * scale)
    throw SingularSystemError(z, "pole of the stability function");

  RationalPair out;
  out.q = lu.solve(CVec(tab.b().cast<Complex>())).transpose();
  out.r = 1.0 + z * out.q.sum();
  return out;
}

CVec scalar_panel_integrate(const Tableau& tab, Complex lambda, double h,
                            const StageProvider& stages, int j_begin, int j_end,
                            Eigen::Index dim) {
  if (h <= 0.0) throw std::invalid_argument("scalar_panel_integrate: h <= 0");
  CVec y = CVec::Zero(dim);
  if (j_begin >= j_end) return y;

  const RationalPair rp = eval_rq(tab, h * lambda);
  for (int j = j_begin; j < j_end; ++j) {
    const StageMatrix gj = stages(j);
    if (gj.rows() != tab.stages() || gj.cols() != dim)
      throw std::invalid_argument("scalar_panel_integrate: stage matrix shape");
    y = rp.r * y + h * (gj.transpose().cast<Complex>() * rp.q.transpose());
  }
  return y;
}

Vec direct_operator_steps(const Tableau& tab, ShiftedSolver& solver, double h,
                          const std::function<Vec(double)>& g,
                          const Vec& u_start, int n_steps, double t_start) {
  if (n_steps < 0)
    throw std::invalid_argument("direct_operator_steps: n_steps < 0");
  if (h <= 0.0) throw std::invalid_argument("direct_operator_steps: h <= 0");
  if (!g) throw std::invalid_argument("direct_operator_steps: empty g");
  const Eigen::Index dim = solver.dimension();
  if (u_start.size() != dim)
    throw std::invalid_argument("direct_operator_steps: u_start dimension");

  const int m = tab.stages();
  const auto& dec = tab.decoupling();
  const double esum = dec.update.sum();

  Vec u = u_start;
  Mat gmat(m, dim);
  CMat stages_w(dim, m);

  for (int step = 0; step < n_steps; ++step) {
    const double tn = t_start + step * h;
    for (int i = 0; i < m; ++i) {
      const Vec gi = g(tn + tab.c()(i) * h);
      if (gi.size() != dim)
        throw std::invalid_argument("direct_operator_steps: g dimension");
      gmat.row(i) = gi.transpose();
    }

    const CVec mass_u = solver.apply_mass(CVec(u.cast<Complex>()));
    const CMat rhs_rows = dec.s_inv * gmat.cast<Complex>();
    for (int i = 0; i < m; ++i) {
      const CVec rhs =
          (dec.s_inv_ainv_one(i) / h) * mass_u + rhs_rows.row(i).transpose();
      stages_w.col(i) = solver.solve(dec.lambda(i) / h, rhs);
    }

    // Map decoupled solutions back to stage values and take the step:
    // u_{n+1} = (1 - sum e) u_n + sum_j e_j U_j with e^T = b^T inv(A).
    const CMat stages_u = stages_w * dec.s.transpose();
    CVec acc = CVec::Zero(dim);
    for (int j = 0; j < m; ++j) acc += dec.update(j) * stages_u.col(j);
    u = ((1.0 - esum) * u.cast<Complex>() + acc).real();
  }
  return u;
}

}  // namespace fastrk
