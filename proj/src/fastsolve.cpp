// SPDX-License-Identifier: Apache-2.0
#include "fastrk/fastsolve.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

namespace fastrk {

namespace {

/// Runs fn(0..count-1) on up to `threads` workers. The caller owns result
/// slots indexed by i, so scheduling cannot affect the outcome. The first
/// exception (lowest index) is rethrown on the calling thread.
void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (int i = w; i < count; i += threads) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);
}

std::vector<int> normalized_support(const Inhomogeneity& g, Eigen::Index dim) {
  std::vector<int> sup = g.support;
  std::sort(sup.begin(), sup.end());
  sup.erase(std::unique(sup.begin(), sup.end()), sup.end());
  if (!sup.empty() && (sup.front() < 0 || sup.back() >= dim))
    throw std::invalid_argument("inhomogeneity support index out of range");
  return sup;
}

/// Spot check: the callback must vanish off its declared support. A few
/// probe times catch honest mistakes; exhaustive checking would cost more
/// than the speedup the support buys.
void check_support(const Inhomogeneity& g, const std::vector<int>& sup,
                   Eigen::Index dim, double t_end) {
  if (sup.empty()) return;
  std::vector<char> on(dim, 0);
  for (int i : sup) on[i] = 1;
  for (const double frac : {0.0, 0.37, 0.71, 1.0}) {
    const Vec gi = g.eval(frac * t_end);
    if (gi.size() != dim)
      throw std::invalid_argument("inhomogeneity dimension mismatch");
    for (Eigen::Index i = 0; i < dim; ++i)
      if (!on[i] && gi(i) != 0.0)
        throw std::invalid_argument(
            "inhomogeneity is nonzero off its declared support");
  }
}

int node_count(const HyperbolaContour& c, bool symmetry) {
  return symmetry ? c.k_max() + 1 : 2 * c.k_max() + 1;
}

/// Contribution of panel level `level`: per contour node, run the scalar
/// stage recurrence across the panel, solve once, then recombine with
/// weights w_k r(h lambda_k)^{B^(level-1)}.
Vec level_contribution(const FastRunPlan& p, ShiftedSolver& solver,
                       const Inhomogeneity& g, const std::vector<int>& sup,
                       int level) {
  const HyperbolaContour& c = p.contour(level);
  const Tableau& tab = p.tableau;
  const int jb = p.ladder.level_begin(level);
  const int je = p.ladder.level_end(level);
  const bool sym = p.options.symmetry_reduction;
  const int k_lo = sym ? 0 : -c.k_max();
  const int nk = c.k_max() - k_lo + 1;
  const int m = tab.stages();
  const Eigen::Index dim = solver.dimension();
  const Eigen::Index cols = sup.empty() ? dim : static_cast<Eigen::Index>(sup.size());

  std::vector<QuadNode> nodes(nk);
  std::vector<RationalPair> rq(nk);
  for (int i = 0; i < nk; ++i) {
    nodes[i] = c.node(k_lo + i);
    rq[i] = eval_rq(tab, p.h * nodes[i].lambda);
  }

  // All node recurrences advance together in one sweep over the panel, so
  // each stage value is evaluated exactly once and storage stays at
  // O(nodes * support) regardless of the panel length.
  CMat y = CMat::Zero(nk, cols);
  Mat gstage(m, cols);
  for (int j = jb; j < je; ++j) {
    const double tj = j * p.h;
    for (int i = 0; i < m; ++i) {
      const Vec gi = g.eval(tj + tab.c()(i) * p.h);
      if (gi.size() != dim)
        throw std::invalid_argument("inhomogeneity dimension mismatch");
      if (sup.empty()) {
        gstage.row(i) = gi.transpose();
      } else {
        for (Eigen::Index s = 0; s < cols; ++s) gstage(i, s) = gi(sup[s]);
      }
    }
    const CMat gc = gstage.cast<Complex>();
    for (int i = 0; i < nk; ++i)
      y.row(i) = rq[i].r * y.row(i) + p.h * (rq[i].q * gc);
  }

  std::vector<CVec> x(nk);
  parallel_for(nk, p.options.threads, [&](int i) {
    CVec rhs;
    if (sup.empty()) {
      rhs = y.row(i).transpose();
    } else {
      rhs = CVec::Zero(dim);
      for (Eigen::Index s = 0; s < cols; ++s) rhs(sup[s]) = y(i, s);
    }
    x[i] = solver.solve(nodes[i].lambda, rhs);
  });

  const std::int64_t power = ipow(p.ladder.base, level - 1);
  Vec out = Vec::Zero(dim);
  for (int i = 0; i < nk; ++i) {
    const Complex ck = nodes[i].weight * pow_int(rq[i].r, power);
    const double fold = (sym && k_lo + i > 0) ? 2.0 : 1.0;
    out += fold * (ck * x[i]).real();
  }
  return out;
}

}  // namespace

int FastRunPlan::direct_steps() const {
  const std::int64_t window = ipow(ladder.base, direct_levels);
  return static_cast<int>(std::min<std::int64_t>(window, ladder.n_step));
}

const HyperbolaContour& FastRunPlan::contour(int level) const {
  const int idx = level - first_fast_level();
  if (idx < 0 || idx >= static_cast<int>(contours.size()))
    throw std::invalid_argument("plan has no contour for this level");
  return contours[idx];
}

const HyperbolaContour& FastRunPlan::initial_value_contour() const {
  if (contours.empty())
    throw Error("plan has no quadrature levels; fold the initial value into "
                "direct stepping instead");
  return contours.back();
}

FastRunPlan plan(int n_step, double h, int base, const Tableau& tab,
                 const PlanOptions& options) {
  if (h <= 0.0) throw std::invalid_argument("plan: h must be positive");
  if (!(options.eps_target > 0.0 && options.eps_target < 1.0))
    throw std::invalid_argument("plan: eps_target must lie in (0, 1)");
  if (options.threads < 1)
    throw std::invalid_argument("plan: threads must be >= 1");

  FastRunPlan p{tab, panel_ladder(n_step, base), h, 0, options, {}, {}};

  int direct = options.direct_levels.value_or(
      (base <= 3 || options.eps_target <= 1e-8) ? 2 : 1);
  if (options.direct_levels && *options.direct_levels < 1)
    throw std::invalid_argument("plan: direct_levels must be >= 1");
  p.direct_levels = direct;

  for (int level = direct + 1; level <= p.ladder.level_count; ++level)
    p.contours.push_back(select_parameters(options.strategy, h, base, level,
                                           options.eps_target, options.sector,
                                           options.k_max, options.theory));

  if (!p.contours.empty() &&
      static_cast<double>(ipow(base, direct)) < std::log10(1.0 / options.eps_target)) {
    std::ostringstream msg;
    msg << "direct window covers " << ipow(base, direct)
        << " steps, fewer than the " << std::log10(1.0 / options.eps_target)
        << " decades of requested accuracy; consider raising direct_levels";
    p.warnings.push_back(msg.str());
  }
  return p;
}

long predicted_solve_count(const FastRunPlan& p, bool with_initial_value) {
  long count = static_cast<long>(p.tableau.stages()) * p.direct_steps();
  const bool sym = p.options.symmetry_reduction;
  for (int level = p.first_fast_level(); level <= p.ladder.level_count; ++level) {
    if (p.ladder.level_empty(level)) continue;
    count += node_count(p.contour(level), sym);
  }
  if (with_initial_value && p.direct_steps() < p.ladder.n_step)
    count += node_count(p.initial_value_contour(), sym);
  return count;
}

Vec homogeneous_term(const FastRunPlan& p, ShiftedSolver& solver,
                     const Vec& u0) {
  const Eigen::Index dim = solver.dimension();
  if (u0.size() != dim)
    throw std::invalid_argument("homogeneous_term: u0 dimension");
  if (u0.isZero(0.0)) return Vec::Zero(dim);

  const HyperbolaContour& c = p.initial_value_contour();
  const bool sym = p.options.symmetry_reduction;
  const int k_lo = sym ? 0 : -c.k_max();
  const int nk = c.k_max() - k_lo + 1;
  const CVec rhs = solver.apply_mass(CVec(u0.cast<Complex>()));

  std::vector<QuadNode> nodes(nk);
  std::vector<Complex> rn(nk);
  for (int i = 0; i < nk; ++i) {
    nodes[i] = c.node(k_lo + i);
    rn[i] = pow_int(eval_rq(p.tableau, p.h * nodes[i].lambda).r,
                    p.ladder.n_step);
  }

  std::vector<CVec> x(nk);
  parallel_for(nk, p.options.threads,
               [&](int i) { x[i] = solver.solve(nodes[i].lambda, rhs); });

  Vec out = Vec::Zero(dim);
  for (int i = 0; i < nk; ++i) {
    const Complex ck = nodes[i].weight * rn[i];
    const double fold = (sym && k_lo + i > 0) ? 2.0 : 1.0;
    out += fold * (ck * x[i]).real();
  }
  return out;
}

Vec run(const FastRunPlan& p, ShiftedSolver& solver, const Inhomogeneity& g,
        const Vec& u0) {
  if (!g.eval) throw std::invalid_argument("run: inhomogeneity callback is empty");
  const Eigen::Index dim = solver.dimension();
  const Vec u_init = u0.size() == 0 ? Vec(Vec::Zero(dim)) : u0;
  if (u_init.size() != dim) throw std::invalid_argument("run: u0 dimension");

  const int n = p.ladder.n_step;
  const int nd = p.direct_steps();
  const std::vector<int> sup = normalized_support(g, dim);
  check_support(g, sup, dim, n * p.h);

  if (nd >= n)
    return direct_operator_steps(p.tableau, solver, p.h, g.eval, u_init, n, 0.0);

  Vec result = direct_operator_steps(p.tableau, solver, p.h, g.eval,
                                     Vec::Zero(dim), nd, (n - nd) * p.h);
  for (int level = p.first_fast_level(); level <= p.ladder.level_count; ++level) {
    if (p.ladder.level_empty(level)) continue;
    result += level_contribution(p, solver, g, sup, level);
  }
  if (!u_init.isZero(0.0)) result += homogeneous_term(p, solver, u_init);
  return result;
}

}  // namespace fastrk
