#pragma once

// Norms, duality mappings J / J* / J^mu and the moduli-of-convexity and
// smoothness estimates for finite-dimensional l^p, together with the
// sampled inequality checks built on them. All checks return signed
// margins (slack of the inequality), never booleans, so a harness can
// report worst cases.

#include <algorithm>
#include <cmath>

#include "lpproj/space.hpp"

namespace lpproj {

/// sign(t) * |t|^e, with the removable singularity at t = 0 resolved to 0.
inline double signed_pow(double t, double e) {
  if (t == 0.0) return 0.0;
  return t > 0.0 ? std::pow(t, e) : -std::pow(-t, e);
}

template <class Derived>
double lp_norm_any(const Eigen::MatrixBase<Derived>& x, double p) {
  const double m = x.cwiseAbs().maxCoeff();
  if (m == 0.0) return 0.0;
  // scale out the max to avoid overflow/underflow in the powers
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    acc += std::pow(std::abs(x[i]) / m, p);
  return m * std::pow(acc, 1.0 / p);
}

inline double lp_norm(const Vec& x, const LpSpace& s) {
  check_dim(x, s);
  return lp_norm_any(x, s.p);
}

/// Norm of a dual element, i.e. the l^q norm.
inline double dual_norm(const Vec& phi, const LpSpace& s) {
  check_dim(phi, s);
  return lp_norm_any(phi, s.q());
}

/// Gauge duality mapping with gauge mu(t) = t^{p-1}: the gradient of
/// ||x||^p / p, componentwise |x_i|^{p-2} x_i.
inline Vec gauge_duality_map(const Vec& x, const LpSpace& s) {
  check_dim(x, s);
  Vec y(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) y[i] = signed_pow(x[i], s.p - 1.0);
  return y;
}

/// Normalized duality mapping J: B -> B*,  Jx = ||x||^{2-p} |x_i|^{p-2} x_i,
/// satisfying <Jx,x> = ||x||^2 and ||Jx||_q = ||x||_p. J(0) = 0.
inline Vec duality_map(const Vec& x, const LpSpace& s) {
  check_dim(x, s);
  const double n = lp_norm(x, s);
  if (n == 0.0) return Vec::Zero(x.size());
  return std::pow(n, 2.0 - s.p) * gauge_duality_map(x, s);
}

/// J* = J^{-1}: the normalized duality mapping of the dual space l^q.
inline Vec inverse_duality_map(const Vec& phi, const LpSpace& s) {
  check_dim(phi, s);
  return duality_map(phi, s.dual());
}

/// Inverse of the gauge mapping: solves |z_i|^{p-2} z_i = phi_i.
inline Vec inverse_gauge_map(const Vec& phi, const LpSpace& s) {
  check_dim(phi, s);
  Vec z(phi.size());
  for (Eigen::Index i = 0; i < phi.size(); ++i)
    z[i] = signed_pow(phi[i], 1.0 / (s.p - 1.0));
  return z;
}

// ---------------------------------------------------------------------------
// Moduli of convexity / smoothness. These are certified one-sided
// *estimates* for l^p, not the exact moduli: delta_lower <= delta_B and
// rho_upper >= rho_B, with constants matching the strong-uniqueness
// lambdas (p-1)/8 and 1/(p 2^p).

/// Certified lower estimate of the modulus of convexity delta_B(eps).
inline double modulus_convexity_lower(double eps, const LpSpace& s) {
  if (eps < 0.0 || eps > 2.0)
    throw std::invalid_argument("modulus_convexity_lower: eps must be in [0,2]");
  if (s.p <= 2.0) return (s.p - 1.0) * eps * eps / 8.0;
  return std::pow(eps, s.p) / (s.p * std::pow(2.0, s.p));
}

/// Certified upper estimate of the modulus of smoothness rho_B(tau).
inline double modulus_smoothness_upper(double tau, const LpSpace& s) {
  if (tau < 0.0)
    throw std::invalid_argument("modulus_smoothness_upper: tau must be >= 0");
  if (s.p <= 2.0) return std::pow(tau, s.p) / s.p;
  return (s.p - 1.0) * tau * tau / 2.0;
}

/// Inverse of the lower convexity estimate, extended monotonically beyond
/// eps = 2 (the continuity bounds evaluate it at arbitrary arguments;
/// inverting a lower estimate only weakens those bounds, keeping them
/// one-sided).
inline double modulus_convexity_lower_inv(double v, const LpSpace& s) {
  if (v <= 0.0) return 0.0;
  if (s.p <= 2.0) return std::sqrt(8.0 * v / (s.p - 1.0));
  return std::pow(v * s.p * std::pow(2.0, s.p), 1.0 / s.p);
}

/// g_B(eps) = delta_B(eps)/eps evaluated on the lower estimate.
inline double convexity_gauge_lower(double eps, const LpSpace& s) {
  if (eps <= 0.0) return 0.0;
  if (s.p <= 2.0) return (s.p - 1.0) * eps / 8.0;
  return std::pow(eps, s.p - 1.0) / (s.p * std::pow(2.0, s.p));
}

inline double convexity_gauge_lower_inv(double v, const LpSpace& s) {
  if (v <= 0.0) return 0.0;
  if (s.p <= 2.0) return 8.0 * v / (s.p - 1.0);
  return std::pow(v * s.p * std::pow(2.0, s.p), 1.0 / (s.p - 1.0));
}

// ---------------------------------------------------------------------------
// Sampled inequality checks (Section-6-style certificates).

/// Clarkson inequality margin for p >= 2:
///   ||x+y||^p <= 2^{p-1}||x||^p + 2^{p-1}||y||^p - ||x-y||^p.
/// Returns RHS - LHS, which must be >= -tol for all inputs.
inline double check_clarkson(const Vec& x, const Vec& y, const LpSpace& s) {
  if (s.p < 2.0)
    throw std::invalid_argument("check_clarkson: requires p >= 2");
  check_dim(x, s);
  check_dim(y, s);
  const double c = std::pow(2.0, s.p - 1.0);
  const double rhs = c * std::pow(lp_norm(x, s), s.p) +
                     c * std::pow(lp_norm(y, s), s.p) -
                     std::pow(lp_norm(x - y, s), s.p);
  const double lhs = std::pow(lp_norm(x + y, s), s.p);
  return rhs - lhs;
}

/// Lower parallelogram inequality margin:
///   2||x||^2 + 2||y||^2 - ||x+y||^2 >= L^{-1} delta_B(||x-y||/C2),
///   C2 = 2 max{1, sqrt((||x||^2+||y||^2)/2)}.
inline double check_parallelogram_lower(const Vec& x, const Vec& y,
                                        const LpSpace& s,
                                        const GeometryConstants& c = {}) {
  check_dim(x, s);
  check_dim(y, s);
  const double nx = lp_norm(x, s), ny = lp_norm(y, s);
  const double lhs = 2.0 * nx * nx + 2.0 * ny * ny -
                     std::pow(lp_norm(x + y, s), 2.0);
  const double C2 = 2.0 * std::max(1.0, std::sqrt((nx * nx + ny * ny) / 2.0));
  const double bound =
      modulus_convexity_lower(lp_norm(x - y, s) / C2, s) / c.figiel_L;
  return lhs - bound;
}

/// Quantitative uniform monotonicity / continuity of J:
///   (2L)^{-1} delta_B(||x-y||/C2) <= <Jx-Jy,x-y> <= (2L)^{-1} rho_B(8 C2 L ||x-y||).
/// Returns {m - lower_bound, upper_bound - m}. The lower margin is
/// certified; the upper one uses the rho upper estimate and is likewise
/// one-sided.
inline std::pair<double, double> check_duality_monotonicity(
    const Vec& x, const Vec& y, const LpSpace& s,
    const GeometryConstants& c = {}) {
  check_dim(x, s);
  check_dim(y, s);
  const double nx = lp_norm(x, s), ny = lp_norm(y, s);
  const double d = lp_norm(x - y, s);
  const double C2 = 2.0 * std::max(1.0, std::sqrt((nx * nx + ny * ny) / 2.0));
  const double m = (duality_map(x, s) - duality_map(y, s)).dot(x - y);
  const double lower =
      modulus_convexity_lower(std::min(2.0, d / C2), s) / (2.0 * c.figiel_L);
  const double upper =
      modulus_smoothness_upper(8.0 * C2 * c.figiel_L * d, s) / (2.0 * c.figiel_L);
  return {m - lower, upper - m};
}

}  // namespace lpproj
