// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fastrk/cli/config.hpp"

namespace fastrk::cli {

struct RunReport {
  std::string problem;
  std::string tableau;
  int n_steps = 0;
  double h = 0.0;
  double deviation = 0.0;  ///< ||fast - direct||_inf / (1 + ||direct||_inf)
  long fast_solves = 0;
  long fast_predicted = 0;
  long direct_solves = 0;
  double fast_ms = 0.0;
  double direct_ms = 0.0;
  std::vector<std::string> warnings;
};

/// Runs the configured problem both ways (contour-accelerated and plain
/// stepping), reconciles the solve counters and prints a key: value report.
/// Throws Error when the measured fast solve count drifts from the
/// prediction.
RunReport cmd_run(const RunConfig& cfg, std::ostream& out);

/// CSV "N,direct_solves,fast_solves" for each N in n_list (fast counts
/// measured, direct = stages * N). Empty n_list sweeps base^3..base^7.
void cmd_bench_solves(const RunConfig& cfg, std::vector<int> n_list,
                      std::ostream& csv);

/// CSV "K,n,a,measured,bound": measured truncated-trapezoid quadrature
/// error for r(-ha)^n q(-ha) against the closed-form a-priori bound, swept
/// over nodes counts, powers and scalar spectra. Rows where the bound's
/// preconditions fail are skipped.
void cmd_quaderr(const RunConfig& cfg, std::ostream& csv);

}  // namespace fastrk::cli
