#pragma once

// Lyapunov functionals V1..V4, their gradients and the sandwich bounds
// tying V2 to the norm distance.

#include <algorithm>
#include <cmath>

#include "lpproj/duality.hpp"

namespace lpproj {

/// V2 value together with its bracketing bounds
/// (||x||-||xi||)^2 <= V2 <= (||x||+||xi||)^2.
struct LyapunovValue {
  double value;
  double lower_bound;
  double upper_bound;
};

/// V1(x, xi) = ||x - xi||^2.
inline double v1(const Vec& x, const Vec& xi, const LpSpace& s) {
  const double d = lp_norm(x - xi, s);
  return d * d;
}

/// V2(Jx, xi) = ||Jx||^2_{B*} - 2<Jx, xi> + ||xi||^2.
/// ||Jx||_{B*} is taken as ||x||_p directly (an exact identity), which
/// keeps the value nonnegative numerically near x = xi.
inline LyapunovValue v2(const Vec& x, const Vec& xi, const LpSpace& s) {
  check_dim(x, s);
  check_dim(xi, s);
  const double nx = lp_norm(x, s), nxi = lp_norm(xi, s);
  const Vec jx = duality_map(x, s);
  double val = nx * nx - 2.0 * jx.dot(xi) + nxi * nxi;
  const double lo = (nx - nxi) * (nx - nxi);
  const double hi = (nx + nxi) * (nx + nxi);
  // roundoff can push the value a hair below zero at x = xi
  if (val < 0.0 && val > -1e-12 * std::max(1.0, hi)) val = 0.0;
  return {val, lo, hi};
}

/// grad_xi V2(Jx, xi) = 2 (J xi - J x), an element of B*.
inline Vec v2_grad_xi(const Vec& x, const Vec& xi, const LpSpace& s) {
  return 2.0 * (duality_map(xi, s) - duality_map(x, s));
}

/// V3(J^mu x, xi) = q^{-1}||J^mu x||^q_{B*} - <J^mu x, xi> + p^{-1}||xi||^p
/// for the gauge mu(t) = t^{p-1}. Note ||J^mu x||_q^q = ||x||^p exactly.
inline double v3(const Vec& x, const Vec& xi, const LpSpace& s) {
  check_dim(x, s);
  check_dim(xi, s);
  const double q = s.q();
  const Vec jmu = gauge_duality_map(x, s);
  double val = std::pow(lp_norm(x, s), s.p) / q - jmu.dot(xi) +
               std::pow(lp_norm(xi, s), s.p) / s.p;
  if (val < 0.0 && val > -1e-12) val = 0.0;
  return val;
}

/// V4(phi, xi) = ||phi||^2_{B*} - 2<phi, xi> + ||xi||^2 with free phi in B*.
/// V4(Jx, xi) = V2(Jx, xi) identically.
inline double v4(const Vec& phi, const Vec& xi, const LpSpace& s) {
  check_dim(phi, s);
  check_dim(xi, s);
  const double np = dual_norm(phi, s), nxi = lp_norm(xi, s);
  return np * np - 2.0 * phi.dot(xi) + nxi * nxi;
}

/// grad_phi V4(phi, xi) = 2 (J* phi - xi), an element of B.
inline Vec v4_grad_phi(const Vec& phi, const Vec& xi, const LpSpace& s) {
  return 2.0 * (inverse_duality_map(phi, s) - xi);
}

/// Sandwich bounds 2 L^{-1} delta_B(||x-xi||/2C) <= V2 <= L^{-1} rho_B(8LC||x-xi||)
/// with C = 2 max{1, sqrt((||x||^2+||xi||^2)/2)}. Returns
/// {V2 - lower_bound, upper_bound - V2}; the lower margin is certified,
/// the upper uses the rho upper estimate.
inline std::pair<double, double> lemma_s2_sandwich(
    const Vec& x, const Vec& xi, const LpSpace& s,
    const GeometryConstants& c = {}) {
  const double nx = lp_norm(x, s), nxi = lp_norm(xi, s);
  const double C = 2.0 * std::max(1.0, std::sqrt((nx * nx + nxi * nxi) / 2.0));
  const double d = lp_norm(x - xi, s);
  const double val = v2(x, xi, s).value;
  const double lower =
      2.0 * modulus_convexity_lower(d / (2.0 * C), s) / c.figiel_L;
  const double upper =
      modulus_smoothness_upper(8.0 * c.figiel_L * C * d, s) / c.figiel_L;
  return {val - lower, upper - val};
}

}  // namespace lpproj
