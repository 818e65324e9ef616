// SPDX-License-Identifier: Apache-2.0
#include "fastrk/analysis.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace fastrk::analysis {

namespace {

constexpr double kPi = std::numbers::pi;

double resolve_half_width(double alpha, double strip_half_width) {
  const double d = strip_half_width > 0.0 ? strip_half_width : 0.5 * alpha;
  if (!(alpha - d > 0.0 && alpha + d < kPi / 2))
    throw std::invalid_argument("strip half-width incompatible with alpha");
  return d;
}

/// Deterministic sweep over the region family Omega_delta, delta <= rho:
/// half-angles beta in [alpha-d, alpha+d], arclength coordinate graded
/// quadratically so both the vertex neighborhood and the asymptotic tails
/// are covered. The delta grid is also graded quadratically toward zero:
/// the admissible slope shrinks with delta (the e^{2 delta} headroom
/// vanishes), so the infimum over the family sits at small delta and a
/// linear grid would miss it. fn(z, delta) is called for ~25k points.
template <typename F>
void for_each_region_sample(double alpha, double d, double rho, F&& fn) {
  constexpr int n_delta = 32, n_beta = 11, n_x = 72;
  for (int id = 0; id < n_delta; ++id) {
    const double frac = static_cast<double>(id + 1) / n_delta;
    const double delta = rho * frac * frac;
    const double x_max = std::acosh(1e6 / delta);
    for (int ib = 0; ib < n_beta; ++ib) {
      const double beta = alpha - d + 2.0 * d * ib / (n_beta - 1);
      for (int ix = 0; ix < n_x; ++ix) {
        const double u = static_cast<double>(ix) / (n_x - 1);
        const double x = x_max * u * u;
        const Complex z = delta * (1.0 - std::sin(Complex(beta, x)));
        fn(z, delta);
      }
    }
  }
}

double floor_two_digits(double v) {
  const double e = std::floor(std::log10(v));
  const double scale = std::pow(10.0, e - 1.0);
  return std::floor(v / scale) * scale;
}

double adaptive_simpson_rec(const std::function<double(double)>& f, double a,
                            double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace

StabilityEnvelope estimate_stability_envelope(const Tableau& tab, double alpha,
                                              double probe_rho,
                                              double strip_half_width) {
  if (!(alpha > 0.0 && alpha < kPi / 2))
    throw std::invalid_argument("alpha must lie in (0, pi/2)");
  const double d = resolve_half_width(alpha, strip_half_width);
  const double start = probe_rho > 0.0 ? probe_rho : 0.5;

  for (double rho = start; rho >= 1e-3; rho *= 0.5) {
    double b_min = std::numeric_limits<double>::infinity();
    bool feasible = true;
    for_each_region_sample(alpha, d, rho, [&](Complex z, double delta) {
      if (!feasible) return;
      const double az = std::abs(z);
      if (az < 1e-14) return;  // r(0) = 1 <= e^{2 delta} holds for free
      const double rr = std::abs(eval_rq(tab, z).r);
      if (rr <= 1e-300) return;
      const double ratio = std::exp(2.0 * delta) / rr;
      if (ratio <= 1.0) {
        feasible = false;
        return;
      }
      b_min = std::min(b_min, (ratio - 1.0) / az);
    });
    if (feasible && b_min > 0.0 && std::isfinite(b_min)) {
      // 2% deflation plus rounding down keeps the envelope valid at
      // points between the samples.
      const double b = floor_two_digits(0.98 * b_min);
      if (b > 0.0) return {rho, b};
    }
  }
  throw Error("no stability envelope found above rho = 1e-3");
}

double tail_log_factor(double a) {
  if (!(a > 0.0)) throw std::invalid_argument("tail_log_factor: a must be positive");
  return 2.0 + std::abs(std::log(-std::expm1(-0.5 * a)));
}

double cosh_tail_integral_bound(double r_low, double a, int n) {
  if (r_low < 0.0) throw std::invalid_argument("r_low must be nonnegative");
  if (!(a > 0.0)) throw std::invalid_argument("a must be positive");
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  const double ch = std::cosh(r_low);
  return tail_log_factor(a) * std::exp(-0.5 * a * ch) +
         std::exp(-(n - 1) * std::log1p(a * ch / n));
}

double trapezoid_error_bound(double strip_norm, double c_decay, double a,
                             int n, double d, double tau, int k_max) {
  if (strip_norm < 0.0 || c_decay < 0.0)
    throw std::invalid_argument("norm constants must be nonnegative");
  if (!(d > 0.0 && tau > 0.0)) throw std::invalid_argument("d, tau must be positive");
  if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
  return strip_norm / std::expm1(2.0 * kPi * d / tau) +
         c_decay * cosh_tail_integral_bound(k_max * tau, a, n);
}

double max_q_norm(const Tableau& tab, double alpha, double d, double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
  const double dd = resolve_half_width(alpha, d);
  double sup = tab.b().norm();  // q(0) = b is the region's closure value
  for_each_region_sample(alpha, dd, rho, [&](Complex z, double) {
    sup = std::max(sup, eval_rq(tab, z).q.norm());
  });
  return 1.1 * sup;
}

BoundInputs make_bound_inputs(const Tableau& tab, const SectorialBounds& sector,
                              double alpha, double d,
                              const StabilityEnvelope& env, double mu, double t,
                              int n, double tau, int k_max) {
  if (!(alpha - d > 0.0 && alpha + d < kPi / 2 - sector.phi))
    throw TheoremInapplicableError(
        "strip exits the resolvent sector: need 0 < alpha-d and "
        "alpha+d < pi/2 - phi");
  if (!(mu > 0.0 && t > 0.0 && n >= 1 && tau > 0.0 && k_max >= 1))
    throw std::invalid_argument("bound inputs must be positive");
  if (mu * t / n > env.rho) {
    std::ostringstream msg;
    msg << "h*mu = " << mu * t / n << " exceeds the envelope radius rho = "
        << env.rho;
    throw TheoremInapplicableError(msg.str());
  }
  const double c0 = sector.m_const / (2.0 * kPi) *
                    std::sqrt((1.0 + std::sin(alpha + d)) /
                              (1.0 - std::sin(alpha + d))) *
                    max_q_norm(tab, alpha, d, env.rho);
  return {c0, env.b, mu, t, n, d, tau, k_max};
}

double apriori_error_bound(const BoundInputs& in) {
  if (!(in.c0 > 0.0 && in.b > 0.0 && in.mu > 0.0 && in.t > 0.0 && in.n >= 1 &&
        in.d > 0.0 && in.tau > 0.0 && in.k_max >= 1))
    throw std::invalid_argument("bound inputs must be positive");
  const double but = in.b * in.mu * in.t;
  if (!(but >= 1.0 && but <= 0.5 * in.n)) {
    std::ostringstream msg;
    msg << "bound requires n/2 >= b*mu*t >= 1, got b*mu*t = " << but
        << " with n = " << in.n;
    throw TheoremInapplicableError(msg.str());
  }

  const double mut = in.mu * in.t;
  const double a0 = 2.0 + 1.5 * in.b;
  const double a1 = 2.0 + 2.0 * in.b;
  const double a2 = 0.5 * in.b;
  const double ckt = std::cosh(in.k_max * in.tau);

  const double term1 =
      std::exp(a0 * mut - std::log(std::expm1(2.0 * kPi * in.d / in.tau)));
  const double term2 = std::exp((a1 - a2 * ckt) * mut);
  const double term3 =
      std::exp(a1 * mut - (in.n - 1) * std::log1p(but * ckt / in.n));
  return 20.0 * in.c0 * (term1 + term2 + term3);
}

double strip_norm_scalar(const Tableau& tab, double mu, double alpha, double d,
                         double h, int n, double a) {
  if (!(mu > 0.0 && h > 0.0 && n >= 1))
    throw std::invalid_argument("strip_norm_scalar: bad parameters");
  resolve_half_width(alpha, d);

  const auto line_integrand = [&](double y) {
    return [&, y](double x) {
      // gamma(x + iy) traces the hyperbola with half-angle alpha - y.
      const Complex arg(alpha - y, x);
      const Complex gam = mu * (1.0 - std::sin(arg));
      const Complex gp = Complex(0.0, -mu) * std::cos(arg);
      const RationalPair rp = eval_rq(tab, h * gam);
      const double rn = std::pow(std::abs(rp.r), n);
      return std::abs(gp) * rn * rp.q.norm() / (2.0 * kPi * std::abs(gam + a));
    };
  };

  // The integrand is dead long before |x| = 60 (r decays like a power of
  // cosh x); piecewise panels keep the adaptive refinement near the peak.
  const double cuts[] = {0.0, 1.0, 3.0, 10.0, 60.0};
  double total = 0.0;
  for (const double y : {d, -d}) {
    const auto f = line_integrand(y);
    for (std::size_t i = 0; i + 1 < std::size(cuts); ++i) {
      total += adaptive_simpson(f, cuts[i], cuts[i + 1], 1e-12);
      total += adaptive_simpson(f, -cuts[i + 1], -cuts[i], 1e-12);
    }
  }
  return total;
}

double strip_norm_bound(double c0, double b, double mu, double t, int n) {
  if (!(c0 > 0.0 && b > 0.0 && mu > 0.0 && t > 0.0 && n >= 1))
    throw std::invalid_argument("strip_norm_bound: bad parameters");
  const double but = b * mu * t;
  if (!(but < n))
    throw std::invalid_argument("strip_norm_bound requires b*mu*t < n");
  const double front =
      4.0 * c0 * std::exp(2.0 * mu * t - n * std::log1p(-but / n));
  return front * (tail_log_factor(but) * std::exp(-0.5 * but) +
                  std::exp(-(n - 1) * std::log1p(but / n)));
}

double measure_quadrature_error(const HyperbolaContour& contour,
                                const Tableau& tab, double h, int n,
                                std::span<const double> spectrum) {
  if (!(h > 0.0 && n >= 1))
    throw std::invalid_argument("measure_quadrature_error: bad parameters");
  const int m = tab.stages();

  const int k_max = contour.k_max();
  std::vector<Complex> lam(2 * k_max + 1), w(2 * k_max + 1);
  std::vector<Complex> rn(2 * k_max + 1);
  std::vector<CRowVec> q(2 * k_max + 1);
  for (int k = -k_max; k <= k_max; ++k) {
    const QuadNode nd = contour.node(k);
    const RationalPair rp = eval_rq(tab, h * nd.lambda);
    lam[k + k_max] = nd.lambda;
    w[k + k_max] = nd.weight;
    rn[k + k_max] = pow_int(rp.r, n);
    q[k + k_max] = rp.q;
  }

  double worst = 0.0;
  for (const double a : spectrum) {
    const RationalPair exact = eval_rq(tab, Complex(-h * a, 0.0));
    const CRowVec target = pow_int(exact.r, n) * exact.q;
    CRowVec sum = CRowVec::Zero(m);
    for (int i = 0; i < 2 * k_max + 1; ++i)
      sum += (w[i] * rn[i] / (lam[i] + a)) * q[i];
    worst = std::max(worst, (target - sum).norm());
  }
  return worst;
}

}  // namespace fastrk::analysis
