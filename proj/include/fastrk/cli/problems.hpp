// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <memory>
#include <string>

#include "fastrk/cli/config.hpp"
#include "fastrk/fastsolve.hpp"
#include "fastrk/operators.hpp"

namespace fastrk::cli {

/// A config turned into runnable pieces. make_solver builds a fresh
/// operator each call so fast and direct runs get independent solve
/// counters and factorization caches.
struct Problem {
  std::function<std::unique_ptr<ShiftedSolver>()> make_solver;
  Inhomogeneity forcing;
  Vec u0;
  std::string description;
};

Problem build_problem(const RunConfig& cfg);

}  // namespace fastrk::cli
