// SPDX-License-Identifier: Apache-2.0
#include "fastrk/cli/problems.hpp"

#include <cmath>
#include <cstdint>
#include <sstream>
#include <utility>

namespace fastrk::cli {

namespace {

/// splitmix64; portable across platforms, unlike the standard library's
/// distribution objects, so seeded configs reproduce bit-identical spectra
/// everywhere.
struct SplitMix {
  std::uint64_t state;
  double next_unit() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * 0x1.0p-53;
  }
};

std::function<double(double)> forcing_shape(ForcingKind kind) {
  switch (kind) {
    case ForcingKind::One:
      return [](double) { return 1.0; };
    case ForcingKind::Sin2:
      return [](double t) {
        const double s = std::sin(t);
        return s * s;
      };
  }
  throw ConfigError("unknown forcing kind");
}

Problem build_scalar(const RunConfig& cfg) {
  const double a = cfg.scalar.a;
  Problem pr;
  pr.make_solver = [a] {
    Vec d(1);
    d << a;
    return make_diagonal(std::move(d));
  };
  const auto shape = forcing_shape(cfg.forcing);
  pr.forcing.eval = [shape](double t) {
    Vec v(1);
    v << shape(t);
    return v;
  };
  pr.u0 = Vec::Constant(1, cfg.u0_scale);
  std::ostringstream desc;
  desc << "scalar decay problem, a = " << a;
  pr.description = desc.str();
  return pr;
}

Problem build_diagonal(const RunConfig& cfg) {
  Vec entries;
  if (!cfg.diagonal.entries.empty()) {
    entries = Eigen::Map<const Vec>(cfg.diagonal.entries.data(),
                                    static_cast<Eigen::Index>(cfg.diagonal.entries.size()));
  } else {
    entries.resize(cfg.diagonal.count);
    SplitMix rng{cfg.seed};
    for (Eigen::Index i = 0; i < entries.size(); ++i)
      entries(i) = cfg.diagonal.min +
                   rng.next_unit() * (cfg.diagonal.max - cfg.diagonal.min);
  }

  Problem pr;
  pr.make_solver = [entries] { return make_diagonal(entries); };
  const auto shape = forcing_shape(cfg.forcing);
  const Eigen::Index dim = entries.size();
  pr.forcing.eval = [shape, dim](double t) {
    return Vec(Vec::Constant(dim, shape(t)));
  };
  pr.u0 = Vec::Constant(dim, cfg.u0_scale);
  std::ostringstream desc;
  desc << "diagonal operator, " << dim << " modes in [" << entries.minCoeff()
       << ", " << entries.maxCoeff() << "]";
  pr.description = desc.str();
  return pr;
}

Problem build_heat1d(const RunConfig& cfg) {
  const int dim = cfg.heat1d.dim;
  const double dx = 1.0 / (dim + 1);
  const double w = 1.0 / (dx * dx);

  Problem pr;
  pr.make_solver = [dim, w] {
    return make_tridiagonal(Vec::Constant(dim - 1 > 0 ? dim - 1 : 0, -w),
                            Vec::Constant(dim, 2.0 * w),
                            Vec::Constant(dim - 1 > 0 ? dim - 1 : 0, -w));
  };
  // Time-dependent boundary values enter the interior equations through
  // the two nodes next to the ends.
  const auto shape = forcing_shape(cfg.forcing);
  pr.forcing.eval = [shape, dim, w](double t) {
    Vec v = Vec::Zero(dim);
    v(0) = w * shape(t);
    v(dim - 1) = w * shape(t);
    return v;
  };
  pr.forcing.support = dim > 1 ? std::vector<int>{0, dim - 1} : std::vector<int>{0};
  pr.u0 = Vec::Constant(dim, cfg.u0_scale);
  std::ostringstream desc;
  desc << "1-d heat equation, " << dim << " interior nodes, forced ends";
  pr.description = desc.str();
  return pr;
}

Problem build_heat2d(const RunConfig& cfg) {
  const auto& p = cfg.heat2d;
  const auto grid = make_grid2d_robin(p.nx, p.ny, p.lx, p.ly, p.rho);
  const Vec flux = grid->flux_load(
      {Grid2dRobinSolver::Side::Top, Grid2dRobinSolver::Side::Left});

  Problem pr;
  pr.make_solver = [p] {
    return make_grid2d_robin(p.nx, p.ny, p.lx, p.ly, p.rho);
  };
  const auto shape = forcing_shape(cfg.forcing);
  const double amp = p.beta_amplitude;
  pr.forcing.eval = [shape, amp, flux](double t) {
    return Vec(amp * shape(t) * flux);
  };
  for (Eigen::Index i = 0; i < flux.size(); ++i)
    if (flux(i) != 0.0) pr.forcing.support.push_back(static_cast<int>(i));
  pr.u0 = Vec::Constant(grid->dimension(), cfg.u0_scale);
  std::ostringstream desc;
  desc << "2-d heat equation on " << p.nx << "x" << p.ny
       << " cells, Robin boundary, inflow on top/left";
  pr.description = desc.str();
  return pr;
}

}  // namespace

Problem build_problem(const RunConfig& cfg) {
  switch (cfg.problem) {
    case ProblemKind::Scalar: return build_scalar(cfg);
    case ProblemKind::Diagonal: return build_diagonal(cfg);
    case ProblemKind::Heat1d: return build_heat1d(cfg);
    case ProblemKind::Heat2dRobin: return build_heat2d(cfg);
  }
  throw ConfigError("unknown problem kind");
}

}  // namespace fastrk::cli
