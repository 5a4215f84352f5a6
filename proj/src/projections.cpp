#include "lpproj/projections.hpp"

#include <cmath>
#include <functional>
#include <limits>

namespace lpproj {

ProjectionResult project_metric(const Vec& x, const SetDescriptor& set,
                                const LpSpace& s, const GeometryConstants& c) {
  return metric_project(set, x, s, c);
}

ProjectionResult project_generalized_Pi(const Vec& x, const SetDescriptor& set,
                                        const LpSpace& s,
                                        const GeometryConstants& c) {
  return generalized_project_dual(set, duality_map(x, s), s, c);
}

ProjectionResult project_generalized_pi(const Vec& phi,
                                        const SetDescriptor& set,
                                        const LpSpace& s,
                                        const GeometryConstants& c) {
  return generalized_project_dual(set, phi, s, c);
}

namespace {

void require_member(const SetDescriptor& set, const Vec& v, const LpSpace& s) {
  if (!contains(set, v, s, 1e-7))
    throw std::invalid_argument("claimed projection is not in the set");
}

double min_over(const std::vector<Vec>& pts,
                const std::function<double(const Vec&)>& f) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& xi : pts) m = std::min(m, f(xi));
  return m;
}

}  // namespace

PropertyMargins check_metric_vp(const Vec& x, const Vec& xbar,
                                const SetDescriptor& set, const LpSpace& s,
                                const std::vector<Vec>& test_points,
                                const std::optional<std::pair<Vec, Vec>>& pair) {
  require_member(set, xbar, s);
  PropertyMargins m;
  const Vec j = duality_map(x - xbar, s);
  const double d2 = v1(x, xbar, s);
  m["5.c"] = min_over(test_points,
                      [&](const Vec& xi) { return j.dot(xbar - xi); });
  m["f52"] = min_over(test_points,
                      [&](const Vec& xi) { return j.dot(x - xi) - d2; });
  if (pair) {
    const auto& [y, ybar] = *pair;
    require_member(set, ybar, s);
    m["5.i"] = (j - duality_map(y - ybar, s)).dot(xbar - ybar);
  }
  return m;
}

PropertyMargins check_generalized_vp(const Vec& x, const Vec& xhat,
                                     const SetDescriptor& set,
                                     const LpSpace& s,
                                     const std::vector<Vec>& test_points,
                                     const std::optional<std::pair<Vec, Vec>>&
                                         pair,
                                     const GeometryConstants& c) {
  require_member(set, xhat, s);
  PropertyMargins m;
  const Vec jx = duality_map(x, s);
  const Vec jhat = duality_map(xhat, s);
  m["7.c"] = min_over(test_points, [&](const Vec& xi) {
    return (jx - jhat).dot(xhat - xi);
  });
  m["7.d"] = min_over(test_points, [&](const Vec& xi) {
    return (jx - duality_map(xi, s)).dot(xhat - xi);
  });
  m["7.e"] = min_over(test_points, [&](const Vec& xi) {
    return (jx - jhat).dot(x - xi);
  });
  const double gap = v2(x, xhat, s).value;
  m["7.h"] = min_over(test_points, [&](const Vec& xi) {
    return v2(x, xi, s).value - gap - v2(xhat, xi, s).value;
  });
  if (pair) {
    const auto& [y, yhat] = *pair;
    require_member(set, yhat, s);
    const Vec jy = duality_map(y, s);
    const Vec jyhat = duality_map(yhat, s);
    m["7.b"] = (jx - jy).dot(xhat - yhat);
    const double nh = lp_norm(xhat, s), nyh = lp_norm(yhat, s);
    const double C = 2.0 * std::max({1.0, nh, nyh});
    m["7.g"] = m["7.b"] -
               modulus_convexity_lower(
                   std::min(2.0, lp_norm(xhat - yhat, s) / C), s) /
                   (2.0 * c.figiel_L);
    m["7.i"] = ((jx - jhat) - (jy - jyhat)).dot(xhat - yhat);
  }
  return m;
}

PropertyMargins check_dual_vp(const Vec& phi, const Vec& phitilde,
                              const SetDescriptor& set, const LpSpace& s,
                              const std::vector<Vec>& test_points,
                              const std::optional<std::pair<Vec, Vec>>& pair,
                              const GeometryConstants& c) {
  require_member(set, phitilde, s);
  PropertyMargins m;
  const Vec jt = duality_map(phitilde, s);
  m["8.c"] = min_over(test_points, [&](const Vec& xi) {
    return (phi - jt).dot(phitilde - xi);
  });
  m["8.d"] = min_over(test_points, [&](const Vec& xi) {
    return (phi - duality_map(xi, s)).dot(phitilde - xi);
  });
  // 8.e with x = J* phi, xtilde = pi_Omega(Jx) = phitilde
  const Vec xprim = inverse_duality_map(phi, s);
  m["8.e"] = min_over(test_points, [&](const Vec& xi) {
    return (phi - jt).dot(xprim - xi);
  });
  const double gap = v4(phi, phitilde, s);
  m["8.h"] = min_over(test_points, [&](const Vec& xi) {
    return v4(phi, xi, s) - gap - v4(jt, xi, s);
  });
  if (pair) {
    const auto& [phi2, pt2] = *pair;
    require_member(set, pt2, s);
    m["8.b"] = (phi - phi2).dot(phitilde - pt2);
    const double C =
        2.0 * std::max({1.0, lp_norm(phitilde, s), lp_norm(pt2, s)});
    m["8.g"] = m["8.b"] -
               modulus_convexity_lower(
                   std::min(2.0, lp_norm(phitilde - pt2, s) / C), s) /
                   (2.0 * c.figiel_L);
    m["8.i"] = ((phi - jt) - (phi2 - duality_map(pt2, s))).dot(phitilde - pt2);
  }
  return m;
}

PropertyMargins check_strong_uniqueness(const Vec& x, const Vec& xbar,
                                        const Vec& xi, const LpSpace& s,
                                        std::optional<double> s_exp) {
  PropertyMargins m;
  const double dxb = lp_norm(x - xbar, s);
  const double dxxi = lp_norm(x - xi, s);
  const double dbxi = lp_norm(xbar - xi, s);
  if (s.p >= 2.0) {
    m["f177"] = std::pow(dxxi, s.p) -
                std::pow(2.0, 1.0 - s.p) * std::pow(dbxi, s.p) -
                std::pow(dxb, s.p);
  }
  if (s.p <= 2.0) {
    m["f161"] = dxxi * dxxi - (s.p - 1.0) * dbxi * dbxi - dxb * dxb;
  }
  if (s.p == 2.0) {
    m["4.h"] = dxxi * dxxi - dbxi * dbxi - dxb * dxb;
  }
  if (s_exp) {
    if (!(*s_exp >= s.p) || s.p < 2.0)
      throw std::invalid_argument("s-theorem requires s >= p >= 2");
    m["s-thm"] = std::pow(dxxi, *s_exp) -
                 std::pow(2.0, 1.0 - *s_exp) * std::pow(dbxi, *s_exp) -
                 std::pow(dxb, *s_exp);
  }
  return m;
}

PropertyMargins check_uniform_continuity(const Vec& x, const Vec& y,
                                         const SetDescriptor& set,
                                         const LpSpace& s,
                                         const GeometryConstants& c) {
  const Vec xbar = metric_project(set, x, s, c).point;
  const Vec ybar = metric_project(set, y, s, c).point;
  const double dist = lp_norm(xbar - ybar, s);
  const double dxy = lp_norm(x - y, s);
  const double C =
      2.0 * std::max({1.0, lp_norm(x - ybar, s), lp_norm(y - xbar, s)});
  const LpSpace sd = s.dual();
  const double L = c.figiel_L;
  PropertyMargins m;
  // f54: C g_B^{-1}(2 L C^2 g_{B*}^{-1}(2 C L ||x-y||))
  m["f54"] = C * convexity_gauge_lower_inv(
                     2.0 * L * C * C *
                         convexity_gauge_lower_inv(2.0 * C * L * dxy, sd),
                     s) -
             dist;
  // f58: C delta_B^{-1}(rho_B(8 C L ||x-y||))
  m["f58"] = C * modulus_convexity_lower_inv(
                     modulus_smoothness_upper(8.0 * C * L * dxy, s), s) -
             dist;
  m["distance"] = dist;
  return m;
}

Vec grid_search_2d(const SetDescriptor& set, const LpSpace& s,
                   const std::function<long double(const Vec&)>& objective,
                   double half_width, int levels, int grid) {
  if (s.dim != 2)
    throw std::invalid_argument("grid_search_2d: dim must be 2");
  // A hyperplane has empty interior, so area grids never land on it;
  // search along the line itself instead.
  if (const auto* hp = std::get_if<Hyperplane>(&set)) {
    Vec base(2), dir(2);
    base = hp->offset / hp->normal.squaredNorm() * hp->normal;
    dir << -hp->normal[1], hp->normal[0];
    dir /= dir.norm();
    double tc = 0.0, hw = half_width;
    double best_t = 0.0;
    long double best_val = std::numeric_limits<long double>::infinity();
    for (int lvl = 0; lvl < levels; ++lvl) {
      for (int i = 0; i < grid * grid; ++i) {
        const double t = tc - hw + 2.0 * hw * i / (grid * grid - 1);
        const long double v = objective((base + t * dir).eval());
        if (v < best_val) {
          best_val = v;
          best_t = t;
        }
      }
      tc = best_t;
      hw = 4.0 * hw / (grid * grid - 1);
    }
    return (base + best_t * dir).eval();
  }

  // Map an arbitrary grid point to a member of the set with elementary
  // closed forms, so the boundary is reachable and thin sets are never missed.
  const auto snap = [&](Vec z) -> Vec {
    if (const auto* hs = std::get_if<Halfspace>(&set)) {
      const double viol = hs->normal.dot(z) - hs->offset;
      if (viol > 0.0) z -= viol / hs->normal.squaredNorm() * hs->normal;
    } else if (const auto* bx = std::get_if<Box>(&set)) {
      z = z.cwiseMax(bx->lo).cwiseMin(bx->hi);
    } else if (const auto* bl = std::get_if<NormBall>(&set)) {
      const double n = lp_norm(z, s);
      if (n > bl->radius) z *= bl->radius / n;
    }
    return z;
  };

  Vec center = Vec::Zero(2);
  double hw = half_width;
  Vec best = snap(center);
  long double best_val = objective(best);
  for (int lvl = 0; lvl < levels; ++lvl) {
    for (int i = 0; i < grid; ++i) {
      for (int j = 0; j < grid; ++j) {
        Vec z(2);
        z[0] = center[0] - hw + 2.0 * hw * i / (grid - 1);
        z[1] = center[1] - hw + 2.0 * hw * j / (grid - 1);
        z = snap(z);
        const long double v = objective(z);
        if (v < best_val) {
          best_val = v;
          best = z;
        }
      }
    }
    center = best;
    hw = 4.0 * hw / (grid - 1);  // shrink around the incumbent
  }
  return best;
}

}  // namespace lpproj
