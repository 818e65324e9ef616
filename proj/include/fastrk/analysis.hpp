// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

#include "fastrk/contour.hpp"
#include "fastrk/operators.hpp"
#include "fastrk/tableau.hpp"
#include "fastrk/types.hpp"

/// A-priori error machinery for the contour quadrature. Everything here
/// returns certified upper bounds (up to sampling of suprema) or measured
/// errors; nothing feeds back into the solvers.
///
/// Geometry glossary used throughout: Omega_delta is the image of the strip
/// |Im w| <= d under w -> delta*(1 - sin(beta + i Im w)) ... i.e. the region
/// swept by the hyperbolas with half-angle parameter beta in
/// [alpha - d, alpha + d] and scale delta. The admissibility condition is
/// 0 < alpha - d and alpha + d < pi/2 - phi_sector.
namespace fastrk::analysis {

/// Envelope constants for the stability function on hyperbolic regions:
/// the largest b (2 significant digits, safety-deflated) with
///   |r(z)| <= e^{2 delta} / (1 + b |z|)   on Omega_delta, 0 < delta <= rho.
struct StabilityEnvelope {
  double rho;
  double b;
};

/// Estimates StabilityEnvelope by dense deterministic sampling (>= 1e4
/// points) of the region family. Starts at probe_rho and halves rho until
/// the envelope inequality is satisfiable; throws Error below rho = 1e-3.
/// strip_half_width <= 0 defaults to alpha/2, which dominates every
/// admissible sector choice.
StabilityEnvelope estimate_stability_envelope(const Tableau& tab, double alpha,
                                              double probe_rho,
                                              double strip_half_width = 0.0);

/// 2 + |log(1 - e^{-a/2})| for a > 0. Decreasing, -> 2 as a -> infinity,
/// ~ |log a| as a -> 0+.
double tail_log_factor(double a);

/// Closed-form majorant of the tail integral
///   int_{r_low}^inf (1 + (a/n) cosh x)^{-n} dx
///     <= tail_log_factor(a) e^{-a cosh(r_low)/2}
///        + (1 + (a/n) cosh(r_low))^{-(n-1)}.
double cosh_tail_integral_bound(double r_low, double a, int n);

/// Truncated-trapezoid error bound for a strip-holomorphic integrand with
/// strip norm `strip_norm` on D_d and real-axis decay
/// ||G(x)|| <= c_decay (1 + (a/n) cosh x)^{-n}:
///   strip_norm / (e^{2 pi d / tau} - 1)
///   + c_decay (tail_log_factor(a) e^{-a cosh(K tau)/2}
///              + (1 + (a/n) cosh(K tau))^{-(n-1)}).
double trapezoid_error_bound(double strip_norm, double c_decay, double a,
                             int n, double d, double tau, int k_max);

/// Everything the closed-form a-priori bound needs. Build by hand or via
/// make_bound_inputs, which also derives c0 and checks admissibility.
struct BoundInputs {
  double c0 = 0.0;   ///< resolvent/weight prefactor (see make_bound_inputs)
  double b = 0.0;    ///< stability-envelope slope
  double mu = 0.0;   ///< contour scale
  double t = 0.0;    ///< n*h, distance to the evaluation point
  int n = 0;         ///< power of r carried by the integrand
  double d = 0.0;    ///< strip half-width
  double tau = 0.0;  ///< node spacing
  int k_max = 0;     ///< truncation index
};

/// c0 = 1.1 * (m_const / 2 pi) sqrt((1+sin(alpha+d))/(1-sin(alpha+d)))
///      * sup_{Omega_rho} ||q(z)||_2, the supremum sampled densely and the
/// 10% inflation covering sampling error. Throws TheoremInapplicableError
/// unless 0 < alpha - d and alpha + d < pi/2 - sector.phi.
BoundInputs make_bound_inputs(const Tableau& tab, const SectorialBounds& sector,
                              double alpha, double d,
                              const StabilityEnvelope& env, double mu, double t,
                              int n, double tau, int k_max);

/// Sampled sup of ||q(z)||_2 over Omega_rho (half-angles in
/// [alpha - d, alpha + d]), inflated by 10%.
double max_q_norm(const Tableau& tab, double alpha, double d, double rho);

/// Closed-form a-priori bound on the truncated-trapezoid error of the
/// contour quadrature for r(-hA)^n q(-hA), valid for n/2 >= b mu t >= 1
/// (throws TheoremInapplicableError otherwise):
///   20 c0 [ e^{a0 mu t} / (e^{2 pi d / tau} - 1)
///           + e^{(a1 - a2 cosh(K tau)) mu t}
///           + e^{a1 mu t} (1 + (b mu t / n) cosh(K tau))^{-(n-1)} ]
/// with a0 = 2 + 3b/2, a1 = 2 + 2b, a2 = b/2.
double apriori_error_bound(const BoundInputs& in);

/// Strip norm N(G, D_d) = int ||G(x+id)|| + ||G(x-id)|| dx of the contour
/// integrand for the scalar operator a, by adaptive numerical integration.
double strip_norm_scalar(const Tableau& tab, double mu, double alpha, double d,
                         double h, int n, double a);

/// Closed-form majorant of the strip norm implied by the envelope constants:
///   4 c0 e^{2 mu t} / (1 - b mu t / n)^n
///   * (tail_log_factor(b mu t) e^{-b mu t / 2} + (1 + b mu t / n)^{-(n-1)}).
/// Requires b mu t < n.
double strip_norm_bound(double c0, double b, double mu, double t, int n);

/// Max over the given scalar spectrum of the Euclidean norm of the
/// truncated-trapezoid quadrature error for r(-ha)^n q(-ha), measured
/// against the closed-form value. This is the quantity the a-priori bounds
/// dominate (diagonalizable A with real spectrum reduces to it entry-wise).
double measure_quadrature_error(const HyperbolaContour& contour,
                                const Tableau& tab, double h, int n,
                                std::span<const double> spectrum);

}  // namespace fastrk::analysis
