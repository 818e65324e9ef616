// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "fastrk/analysis.hpp"
#include "test_util.hpp"

using namespace fastrk;
namespace an = fastrk::analysis;

namespace {

constexpr double kPi = std::numbers::pi;

/// splitmix64; keeps the random spot checks reproducible across platforms.
struct Rng {
  std::uint64_t state;
  double next() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * 0x1.0p-53;
  }
};

}  // namespace

TEST_CASE("tail log factor has the known value at a = 2") {
  CHECK(std::abs(an::tail_log_factor(2.0) - 2.458675145387082) < 1e-14);
  CHECK(an::tail_log_factor(50.0) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(an::tail_log_factor(1e-8) > 15.0);  // ~ 2 + |log(a/2)| for small a
  CHECK(an::tail_log_factor(0.5) > an::tail_log_factor(1.0));
  CHECK_THROWS_AS((void)an::tail_log_factor(0.0), std::invalid_argument);
}

TEST_CASE("closed-form tail bound dominates the numerical integral") {
  for (const double r_low : {0.5, 1.0, 2.0, 4.0})
    for (const double a : {0.5, 1.0, 2.0, 10.0})
      for (const int n : {5, 25, 125}) {
        CAPTURE(r_low);
        CAPTURE(a);
        CAPTURE(n);
        const auto f = [&](double x) {
          return std::exp(-(n) * std::log1p(a * std::cosh(x) / n));
        };
        // cosh growth kills the integrand long before the cut at r_low + 40.
        const double integral = testutil::integrate(f, r_low, r_low + 40.0, 1e-13);
        const double bound = an::cosh_tail_integral_bound(r_low, a, n);
        CHECK(bound >= integral * (1.0 - 1e-9));
      }
}

TEST_CASE("trapezoid bound decreases in the truncation index") {
  double prev = 1e300;
  for (const int k : {5, 10, 20, 40}) {
    const double v = an::trapezoid_error_bound(1.0, 1.0, 2.0, 25, 0.25, 0.2, k);
    CHECK(v < prev);
    prev = v;
  }
  // Recomposition: the bound is its two published pieces and nothing more.
  const double v = an::trapezoid_error_bound(3.0, 2.0, 1.5, 10, 0.3, 0.25, 7);
  const double want = 3.0 / std::expm1(2.0 * kPi * 0.3 / 0.25) +
                      2.0 * an::cosh_tail_integral_bound(7 * 0.25, 1.5, 10);
  CHECK(v == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("estimated stability envelopes hold on fresh random samples") {
  const double alpha = kPi / 4;
  const double d = kPi / 12;
  Rng rng{20240817u};

  for (auto kind : {TableauKind::ImplicitEuler, TableauKind::RadauIIA2,
                    TableauKind::RadauIIA3}) {
    const Tableau tab = Tableau::make(kind);
    CAPTURE(tab.name());
    const an::StabilityEnvelope env =
        an::estimate_stability_envelope(tab, alpha, 0.5, d);
    CHECK(env.rho > 0.0);
    CHECK(env.b > 0.0);

    int violations = 0;
    for (int s = 0; s < 100000; ++s) {
      const double delta = env.rho * (0.01 + 0.99 * rng.next());
      const double beta = alpha - d + 2.0 * d * rng.next();
      const double u = rng.next();
      const double x = std::acosh(1e6 / delta) * u * u;
      const Complex z = delta * (1.0 - std::sin(Complex(beta, x)));
      const double rr = std::abs(eval_rq(tab, z).r);
      const double envval = std::exp(2.0 * delta) / (1.0 + env.b * std::abs(z));
      if (rr > envval * (1.0 + 1e-9)) ++violations;
    }
    CHECK(violations == 0);
  }
}

TEST_CASE("sampled weight-row supremum is at least the origin value") {
  for (auto kind : {TableauKind::ImplicitEuler, TableauKind::RadauIIA2,
                    TableauKind::RadauIIA3}) {
    const Tableau tab = Tableau::make(kind);
    const double sup = an::max_q_norm(tab, kPi / 4, kPi / 12, 0.5);
    CHECK(sup >= 0.99 * tab.b().norm());
  }
}

TEST_CASE("bound inputs enforce the geometric admissibility conditions") {
  const Tableau tab = Tableau::make(TableauKind::RadauIIA2);
  const SectorialBounds sb = spd_bounds();
  const an::StabilityEnvelope env =
      an::estimate_stability_envelope(tab, kPi / 4, 0.5, kPi / 12);

  // Strip wider than the sector leaves room for.
  CHECK_THROWS_AS((void)an::make_bound_inputs(tab, sb, kPi / 4, kPi / 4, env,
                                              1.0, 1.0, 10, 0.3, 10),
                  TheoremInapplicableError);
  // h*mu beyond the envelope radius.
  CHECK_THROWS_AS((void)an::make_bound_inputs(tab, sb, kPi / 4, kPi / 12, env,
                                              100.0, 10.0, 10, 0.3, 10),
                  TheoremInapplicableError);

  const an::BoundInputs ok = an::make_bound_inputs(
      tab, sb, kPi / 4, kPi / 12, env, 1.0, 2.0, 25, 0.3, 12);
  CHECK(ok.c0 > 0.0);
  CHECK(ok.b == env.b);
  CHECK(ok.n == 25);
}

TEST_CASE("a-priori bound rejects parameters outside its validity range") {
  an::BoundInputs in;
  in.c0 = 1.0;
  in.b = 0.25;
  in.mu = 1.0;
  in.t = 1.0;  // b*mu*t = 0.25 < 1
  in.n = 25;
  in.d = 0.25;
  in.tau = 0.3;
  in.k_max = 10;
  CHECK_THROWS_AS((void)an::apriori_error_bound(in), TheoremInapplicableError);
  in.t = 200.0;  // b*mu*t = 50 > n/2
  CHECK_THROWS_AS((void)an::apriori_error_bound(in), TheoremInapplicableError);
  in.t = 8.0;  // b*mu*t = 2, admissible
  CHECK(an::apriori_error_bound(in) > 0.0);
}

TEST_CASE("strip norm integral matches an independent quadrature") {
  const Tableau tab = Tableau::make(TableauKind::RadauIIA2);
  const double mu = 1.5, alpha = kPi / 4, d = kPi / 12, h = 0.05;
  const int n = 30;
  const double a = 2.0;

  const double got = an::strip_norm_scalar(tab, mu, alpha, d, h, n, a);
  CHECK(got > 0.0);

  double want = 0.0;
  for (const double y : {d, -d}) {
    const auto f = [&](double x) {
      const Complex arg(alpha - y, x);
      const Complex gam = mu * (1.0 - std::sin(arg));
      const Complex gp = Complex(0.0, -mu) * std::cos(arg);
      const RationalPair rp = eval_rq(tab, h * gam);
      return std::abs(gp) * std::pow(std::abs(rp.r), n) * rp.q.norm() /
             (2.0 * kPi * std::abs(gam + a));
    };
    want += testutil::integrate(f, -60.0, 60.0, 1e-11);
  }
  CHECK(got == doctest::Approx(want).epsilon(1e-7));
}

TEST_CASE("closed-form strip majorant dominates measured strip norms") {
  const Tableau tab = Tableau::make(TableauKind::RadauIIA2);
  const SectorialBounds sb = spd_bounds();
  const double alpha = kPi / 4, d = kPi / 12, h = 0.032;
  const an::StabilityEnvelope env =
      an::estimate_stability_envelope(tab, alpha, 0.5, d);

  for (const int n : {25, 125}) {
    const double t = n * h;
    const double but = std::min(std::max(3.0 * env.b, 1.05),
                                std::min(0.45 * n, 0.98 * env.rho * env.b * n));
    const double mu = but / (env.b * t);
    const an::BoundInputs in =
        an::make_bound_inputs(tab, sb, alpha, d, env, mu, t, n, 0.3, 10);
    const double majorant = an::strip_norm_bound(in.c0, in.b, in.mu, in.t, in.n);
    for (const double a : {0.1, 1.0, 10.0, 100.0}) {
      const double measured = an::strip_norm_scalar(tab, mu, alpha, d, h, n, a);
      CAPTURE(n);
      CAPTURE(a);
      CHECK(majorant >= measured);
    }
  }
  CHECK_THROWS_AS((void)an::strip_norm_bound(1.0, 1.0, 1.0, 30.0, 25),
                  std::invalid_argument);  // b*mu*t beyond n
}

TEST_CASE("a-priori bound dominates measured quadrature errors and decays") {
  const Tableau tab = Tableau::make(TableauKind::RadauIIA2);
  const SectorialBounds sb = spd_bounds();
  const double alpha = kPi / 4, d = kPi / 12, h = 0.032;
  const an::StabilityEnvelope env =
      an::estimate_stability_envelope(tab, alpha, 0.5, d);
  const std::vector<double> spectrum = {0.1, 1.0, 10.0, 100.0};

  for (const int n : {25, 125, 625}) {
    const double t = n * h;
    const double hi = std::min(0.45 * n, 0.98 * env.rho * env.b * n);
    REQUIRE(hi >= 1.05);
    const double but = std::min(std::max(3.0 * env.b, 1.05), hi);
    const double mu = but / (env.b * t);

    double prev_measured = 1e300;
    for (const int k_max : {8, 13, 20, 25}) {
      const double tau = 5.0 / k_max;
      const HyperbolaContour c(mu, alpha, 0.0, tau, k_max);
      const double measured =
          an::measure_quadrature_error(c, tab, h, n, spectrum);
      const double bound = an::apriori_error_bound(an::make_bound_inputs(
          tab, sb, alpha, d, env, mu, t, n, tau, k_max));
      CAPTURE(n);
      CAPTURE(k_max);
      CHECK(bound >= measured);
      // More nodes must pay off until roundoff: at least e^{-0.2} per unit
      // increase of the truncation index.
      CHECK((measured <= prev_measured * std::exp(-0.2 * 5.0) ||
             measured < 1e-14));
      prev_measured = measured;
    }
  }
}
