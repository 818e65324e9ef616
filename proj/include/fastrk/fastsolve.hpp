// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fastrk/contour.hpp"
#include "fastrk/operators.hpp"
#include "fastrk/tableau.hpp"
#include "fastrk/types.hpp"

namespace fastrk {

/// Time-dependent inhomogeneity g(t). eval must return a full-dimension
/// vector; a nonempty support lists the only indices allowed to be nonzero,
/// which the panel recurrences exploit. The driver spot-checks the claim.
struct Inhomogeneity {
  std::function<Vec(double)> eval;
  std::vector<int> support;  ///< empty means dense
};

struct PlanOptions {
  ParamStrategy strategy = ParamStrategy::Experiment;
  double eps_target = 1e-5;
  SectorialBounds sector = spd_bounds();
  /// Nodes per half-contour. Must be >= 1 under Experiment; any value <= 0
  /// under Theory derives it from theory.c2.
  int k_max = 15;
  /// Number of innermost levels handled by direct stepping (direct part
  /// covers min(B^direct_levels, N) steps). Unset picks 1, or 2 when the
  /// base is small (<= 3) or eps_target is tight (<= 1e-8).
  std::optional<int> direct_levels;
  /// Fold conjugate contour nodes: real data makes x_{-k} = conj(x_k), so
  /// only k >= 0 is solved and k > 0 contributes twice its real part.
  bool symmetry_reduction = true;
  /// Worker threads for the per-node solve phase. Results are reduced in
  /// fixed node order, so the output is identical for any thread count.
  int threads = 1;
  TheoryConstants theory;
};

/// Precomputed schedule for one fast evaluation: the panel ladder, the
/// per-level contours, and the split between direct and quadrature levels.
/// Building a plan touches no operator; the same plan may be run against
/// any solver of matching dimension.
struct FastRunPlan {
  Tableau tableau;
  PanelLadder ladder;
  double h = 0.0;
  int direct_levels = 0;
  PlanOptions options;
  /// contours[i] belongs to ladder level first_fast_level() + i.
  std::vector<HyperbolaContour> contours;
  std::vector<std::string> warnings;

  int first_fast_level() const { return direct_levels + 1; }
  /// Steps covered by direct integration: min(B^direct_levels, N).
  int direct_steps() const;
  const HyperbolaContour& contour(int level) const;
  /// Contour used for propagating the initial value over all N steps.
  const HyperbolaContour& initial_value_contour() const;
};

FastRunPlan plan(int n_step, double h, int base, const Tableau& tab,
                 const PlanOptions& options);

/// Exact number of solver calls run() will make: stages * direct_steps plus
/// the node count of every nonempty fast level, plus one extra node set when
/// with_initial_value (symmetry reduction counts k_max + 1 nodes per level,
/// otherwise 2 k_max + 1).
long predicted_solve_count(const FastRunPlan& plan, bool with_initial_value);

/// Contour-quadrature approximation of r(-hA)^N u0, the N-step decay of the
/// initial value, using the outermost-level contour. Zero u0 costs nothing.
Vec homogeneous_term(const FastRunPlan& plan, ShiftedSolver& solver,
                     const Vec& u0);

/// Result of N implicit Runge-Kutta steps for M u' + A u = g, u(0) = u0,
/// computed with O(levels * k_max) shifted solves instead of N * stages.
///
/// The last direct_steps steps are integrated directly (from zero data at
/// t = (N - direct_steps) h); every earlier panel contributes through one
/// contour per level: scalar stage recurrences per node, one solve per node,
/// then recombination with weights w_k r(h lambda_k)^{B^(l-1)}. A nonzero u0
/// adds one homogeneous_term() quadrature. Accumulation order is fixed, so
/// results are reproducible run to run.
Vec run(const FastRunPlan& plan, ShiftedSolver& solver, const Inhomogeneity& g,
        const Vec& u0);

}  // namespace fastrk
