// SPDX-License-Identifier: Apache-2.0
#include "fastrk/cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <sstream>

#include "fastrk/analysis.hpp"
#include "fastrk/cli/problems.hpp"
#include "fastrk/fastsolve.hpp"

namespace fastrk::cli {

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

/// %.12g keeps CSV output byte-stable across runs and locales.
std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

PlanOptions plan_options(const RunConfig& cfg, const ShiftedSolver& solver) {
  PlanOptions opt;
  opt.strategy = cfg.strategy;
  opt.eps_target = cfg.eps_target;
  opt.sector = solver.bounds();
  // Unset k_max defers to the strategy: the experiment tuning keeps the
  // 31-node default, the theory rule sizes the window from eps_target.
  opt.k_max = cfg.k_max.value_or(
      cfg.strategy == ParamStrategy::Theory ? 0 : PlanOptions{}.k_max);
  opt.direct_levels = cfg.direct_levels;
  opt.symmetry_reduction = cfg.symmetry;
  opt.threads = cfg.threads;
  return opt;
}

}  // namespace

RunReport cmd_run(const RunConfig& cfg, std::ostream& out) {
  const Problem prob = build_problem(cfg);
  const Tableau tab = Tableau::make(cfg.tableau);
  const double h = cfg.step_size();

  const auto fast_solver = prob.make_solver();
  const FastRunPlan pl =
      plan(cfg.n_steps, h, cfg.base, tab, plan_options(cfg, *fast_solver));
  const bool with_u0 = !prob.u0.isZero(0.0);
  const long predicted = predicted_solve_count(pl, with_u0);

  auto t0 = std::chrono::steady_clock::now();
  const Vec fast = run(pl, *fast_solver, prob.forcing, prob.u0);
  const double fast_ms = ms_since(t0);
  const long fast_count = fast_solver->solve_count();
  if (fast_count != predicted) {
    std::ostringstream msg;
    msg << "solve counter mismatch: measured " << fast_count << ", predicted "
        << predicted;
    throw Error(msg.str());
  }

  const auto direct_solver = prob.make_solver();
  t0 = std::chrono::steady_clock::now();
  const Vec direct = direct_operator_steps(tab, *direct_solver, h,
                                           prob.forcing.eval, prob.u0,
                                           cfg.n_steps, 0.0);
  const double direct_ms = ms_since(t0);

  RunReport rep;
  rep.problem = prob.description;
  rep.tableau = tab.name();
  rep.n_steps = cfg.n_steps;
  rep.h = h;
  rep.deviation = (fast - direct).cwiseAbs().maxCoeff() /
                  (1.0 + direct.cwiseAbs().maxCoeff());
  rep.fast_solves = fast_count;
  rep.fast_predicted = predicted;
  rep.direct_solves = direct_solver->solve_count();
  rep.fast_ms = fast_ms;
  rep.direct_ms = direct_ms;
  rep.warnings = pl.warnings;

  out << "problem:        " << rep.problem << "\n"
      << "tableau:        " << rep.tableau << "\n"
      << "n_steps:        " << rep.n_steps << "\n"
      << "h:              " << fmt_g(rep.h) << "\n"
      << "strategy:       " << to_string(cfg.strategy) << "\n"
      << "base:           " << cfg.base << "\n"
      << "deviation:      " << fmt_g(rep.deviation) << "\n"
      << "fast solves:    " << rep.fast_solves << " (predicted "
      << rep.fast_predicted << ")\n"
      << "direct solves:  " << rep.direct_solves << "\n"
      << "fast wall ms:   " << fmt_g(rep.fast_ms) << "\n"
      << "direct wall ms: " << fmt_g(rep.direct_ms) << "\n";
  for (const auto& w : rep.warnings) out << "warning:        " << w << "\n";
  return rep;
}

void cmd_bench_solves(const RunConfig& cfg, std::vector<int> n_list,
                      std::ostream& csv) {
  if (n_list.empty())
    for (int p = 3; p <= 7; ++p)
      n_list.push_back(static_cast<int>(ipow(cfg.base, p)));

  const Problem prob = build_problem(cfg);
  const Tableau tab = Tableau::make(cfg.tableau);

  csv << "N,direct_solves,fast_solves\n";
  for (const int n : n_list) {
    if (n < 1) throw ConfigError("bench-solves: N must be >= 1");
    RunConfig c = cfg;
    c.n_steps = n;
    if (c.h) c.t_final.reset();  // keep the explicit step size across the sweep
    const double h = c.step_size();

    const auto solver = prob.make_solver();
    const FastRunPlan pl =
        plan(n, h, cfg.base, tab, plan_options(cfg, *solver));
    (void)run(pl, *solver, prob.forcing, prob.u0);
    const long measured = solver->solve_count();
    const long predicted = predicted_solve_count(pl, !prob.u0.isZero(0.0));
    if (measured != predicted) {
      std::ostringstream msg;
      msg << "solve counter mismatch at N = " << n << ": measured " << measured
          << ", predicted " << predicted;
      throw Error(msg.str());
    }
    csv << n << "," << static_cast<long>(tab.stages()) * n << "," << measured
        << "\n";
  }
}

void cmd_quaderr(const RunConfig& cfg, std::ostream& csv) {
  constexpr double kPi = std::numbers::pi;
  const Tableau tab = Tableau::make(cfg.tableau);
  const double h = cfg.step_size();
  const SectorialBounds sector = spd_bounds();
  const double alpha = kPi / 4;
  const double d = 0.5 * std::min(alpha, kPi / 2 - sector.phi - alpha);
  const auto env = analysis::estimate_stability_envelope(tab, alpha, 0.5, d);

  csv << "K,n,a,measured,bound\n";
  for (const int k_max : {8, 10, 13, 15, 20, 25}) {
    const double tau = 5.0 / k_max;
    for (const int n : {10, 25, 125, 625}) {
      const double t = n * h;
      // Pick mu so the bound's preconditions (n/2 >= b mu t >= 1 and
      // h mu <= rho) hold; skip n too small to admit any such mu.
      const double hi = std::min(0.45 * n, 0.98 * env.rho * env.b * n);
      if (hi < 1.05) continue;
      const double but = std::min(std::max(3.0 * env.b, 1.05), hi);
      const double mu = but / (env.b * t);

      const HyperbolaContour contour(mu, alpha, 0.0, tau, k_max);
      const auto inputs = analysis::make_bound_inputs(tab, sector, alpha, d,
                                                      env, mu, t, n, tau, k_max);
      const double bound = analysis::apriori_error_bound(inputs);
      for (const double a : {0.1, 1.0, 10.0}) {
        const double spectrum[] = {a};
        const double measured =
            analysis::measure_quadrature_error(contour, tab, h, n, spectrum);
        csv << k_max << "," << n << "," << fmt_g(a) << "," << fmt_g(measured)
            << "," << fmt_g(bound) << "\n";
      }
    }
  }
}

}  // namespace fastrk::cli
