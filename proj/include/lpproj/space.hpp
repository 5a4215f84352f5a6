#pragma once

#include <Eigen/Core>
#include <cmath>
#include <stdexcept>

namespace lpproj {

using Vec = Eigen::VectorXd;

/// Finite-dimensional l^p space descriptor. The dual exponent q is derived
/// from p, never stored independently, so 1/p + 1/q = 1 holds exactly.
struct LpSpace {
  double p;
  Eigen::Index dim;

  LpSpace(double p_, Eigen::Index dim_) : p(p_), dim(dim_) {
    if (!(p > 1.0) || !std::isfinite(p))
      throw std::invalid_argument("LpSpace: exponent p must satisfy 1 < p < inf");
    if (dim < 1) throw std::invalid_argument("LpSpace: dim must be >= 1");
  }

  double q() const { return p / (p - 1.0); }

  /// The dual space B* = l^q of the same dimension.
  LpSpace dual() const { return LpSpace(q(), dim); }
};

/// Constants entering the one-sided inequality checks. L is Figiel's
/// constant, for which only 1 < L < 3.18 is known; we take the weakest
/// admissible value so every bound stays certified.
struct GeometryConstants {
  double figiel_L = 3.18;
  double tol_identity = 1e-10;
  double tol_kkt = 1e-10;

  void validate() const {
    if (!(figiel_L > 1.0)) throw std::invalid_argument("figiel_L must exceed 1");
    if (!(tol_identity > 0.0) || !(tol_kkt > 0.0))
      throw std::invalid_argument("tolerances must be positive");
  }
};

inline void check_dim(const Vec& x, const LpSpace& s) {
  if (x.size() != s.dim)
    throw std::invalid_argument("vector dimension does not match space");
}

}  // namespace lpproj
