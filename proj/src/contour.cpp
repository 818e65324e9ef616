// SPDX-License-Identifier: Apache-2.0
#include "fastrk/contour.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fastrk/operators.hpp"

namespace fastrk {

namespace {
constexpr double kPi = std::numbers::pi;
}

HyperbolaContour::HyperbolaContour(double mu, double alpha, double sigma,
                                   double tau, int k_max)
    : mu_(mu), alpha_(alpha), sigma_(sigma), tau_(tau), k_max_(k_max) {
  if (!(mu > 0.0)) throw std::invalid_argument("contour: mu must be positive");
  if (!(alpha > 0.0 && alpha < kPi / 2))
    throw std::invalid_argument("contour: alpha must lie in (0, pi/2)");
  if (!(tau > 0.0)) throw std::invalid_argument("contour: tau must be positive");
  if (k_max < 1) throw std::invalid_argument("contour: k_max must be >= 1");
}

Complex HyperbolaContour::point(double theta) const {
  return sigma_ + mu_ * (1.0 - std::sin(Complex(alpha_, theta)));
}

Complex HyperbolaContour::derivative(double theta) const {
  return Complex(0.0, -mu_) * std::cos(Complex(alpha_, theta));
}

QuadNode HyperbolaContour::node(int k) const {
  if (k < -k_max_ || k > k_max_)
    throw std::invalid_argument("contour: node index out of range");
  const double theta = k * tau_;
  // weight = (i tau / 2 pi) gamma'(theta); the sign fixes the orientation
  // for which the quadrature reproduces r(-hA)^n q(-hA) (central weight
  // positive, conjugate-symmetric pairs).
  return {point(theta), Complex(0.0, tau_ / (2.0 * kPi)) * derivative(theta)};
}

std::vector<QuadNode> HyperbolaContour::nodes() const {
  std::vector<QuadNode> out;
  out.reserve(2 * k_max_ + 1);
  for (int k = -k_max_; k <= k_max_; ++k) out.push_back(node(k));
  return out;
}

PanelLadder panel_ladder(int n_step, int base) {
  if (n_step < 1) throw std::invalid_argument("panel_ladder: n_step must be >= 1");
  if (base < 2) throw std::invalid_argument("panel_ladder: base must be >= 2");

  int levels = 0;
  std::int64_t reach = 1;
  while (reach < n_step) {
    reach *= base;
    ++levels;
  }

  PanelLadder ladder;
  ladder.n_step = n_step;
  ladder.base = base;
  ladder.level_count = levels;
  ladder.boundaries.resize(levels + 1);
  for (int l = 0; l < levels; ++l) {
    const std::int64_t cut = n_step - ipow(base, l);
    ladder.boundaries[l] = static_cast<int>(cut > 0 ? cut : 0);
  }
  ladder.boundaries[levels] = 0;
  return ladder;
}

HyperbolaContour select_parameters(ParamStrategy strategy, double h, int base,
                                   int level, double eps,
                                   const SectorialBounds& sector, int k_max,
                                   const TheoryConstants& theory) {
  if (h <= 0.0) throw std::invalid_argument("select_parameters: h must be positive");
  if (base < 2) throw std::invalid_argument("select_parameters: base must be >= 2");
  if (level < 1) throw std::invalid_argument("select_parameters: level must be >= 1");

  const double window = h * static_cast<double>(ipow(base, level));

  if (strategy == ParamStrategy::Experiment) {
    if (k_max < 1)
      throw std::invalid_argument("select_parameters: k_max must be >= 1");
    return {3.0 / window, kPi / 4, sector.sigma, 5.0 / k_max, k_max};
  }

  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("select_parameters: eps must lie in (0, 1)");
  const double log_eps = std::log(1.0 / eps);
  const double alpha = std::min(kPi / 4, 0.5 * (kPi / 2 - sector.phi));
  double d = theory.d;
  if (d <= 0.0) d = 0.5 * std::min(alpha, kPi / 2 - sector.phi - alpha);
  if (!(alpha - d > 0.0 && alpha + d < kPi / 2 - sector.phi))
    throw std::invalid_argument("select_parameters: strip width incompatible with sector");

  const double mu = theory.c1 * log_eps / window;
  // Balance the two exponential error sources: discretization decays like
  // exp(-2 pi d / tau), truncation like the r-power decay along the contour.
  const double tau = 2.0 * kPi * d / (log_eps * (1.0 + theory.a0 * theory.c1));
  const int k = k_max >= 1
                    ? k_max
                    : static_cast<int>(std::ceil(std::acosh(theory.c2) / tau));
  return {mu, alpha, sector.sigma, tau, k};
}

CMat quad_approx_rn_q(const HyperbolaContour& contour, const Tableau& tab,
                      ShiftedSolver& solver, double h, int n, const Vec& v) {
  if (n < 1) throw std::invalid_argument("quad_approx_rn_q: n must be >= 1");
  if (h <= 0.0) throw std::invalid_argument("quad_approx_rn_q: h must be positive");
  if (v.size() != solver.dimension())
    throw std::invalid_argument("quad_approx_rn_q: v dimension");

  const CVec vc = v.cast<Complex>();
  CMat out = CMat::Zero(tab.stages(), v.size());
  for (int k = -contour.k_max(); k <= contour.k_max(); ++k) {
    const QuadNode nd = contour.node(k);
    const CVec x = solver.solve(nd.lambda, vc);
    const RationalPair rp = eval_rq(tab, h * nd.lambda);
    out += (nd.weight * pow_int(rp.r, n)) * (rp.q.transpose() * x.transpose());
  }
  return out;
}

}  // namespace fastrk
