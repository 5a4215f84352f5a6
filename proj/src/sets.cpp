#include "lpproj/sets.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace lpproj {

namespace {

// Derivative-free scalar root finder for a nonincreasing map h with
// h(0) > 0: expands the bracket geometrically, then bisects until the
// residual meets tol. Returns the multiplier; reports iterations taken.
double bisect_decreasing(const std::function<double(double)>& h, double tol,
                         int& iters) {
  double lo = 0.0, hi = 1.0;
  int expand = 0;
  while (h(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++expand > 200)
      throw std::runtime_error("projection root-find: bracket expansion failed");
  }
  iters = expand;
  // drive the bracket itself to machine width: a small residual alone can
  // leave the multiplier (and the tangential projection error) far larger
  // than the normal-direction residual suggests
  double mid = hi;
  for (int k = 0; k < 200; ++k) {
    mid = 0.5 * (lo + hi);
    const double v = h(mid);
    ++iters;
    if (std::abs(v) <= tol && hi - lo <= 1e-15 * std::max(1.0, hi)) break;
    (v > 0.0 ? lo : hi) = mid;
    if (hi - lo <= 1e-17 * std::max(1.0, hi)) break;
  }
  return mid;
}

double scale_of(const Vec& n, const Vec& x, double c, const LpSpace& s) {
  return std::max(1.0, dual_norm(n, s) * lp_norm(x, s) + std::abs(c));
}

Vec clamp(const Vec& x, const Box& b) {
  return x.cwiseMax(b.lo).cwiseMin(b.hi);
}

// KKT residual of min ||xi||^2 - 2<phi,xi> over a box: componentwise
// violation of the sign conditions on (J xi - phi).
double box_kkt_residual(const Vec& xi, const Vec& phi, const Box& b,
                        const LpSpace& s) {
  const Vec g = duality_map(xi, s) - phi;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < xi.size(); ++i) {
    double viol;
    if (xi[i] <= b.lo[i])
      viol = std::max(0.0, -g[i]);
    else if (xi[i] >= b.hi[i])
      viol = std::max(0.0, g[i]);
    else
      viol = std::abs(g[i]);
    worst = std::max(worst, viol);
  }
  return worst;
}

}  // namespace

void validate(const SetDescriptor& set, const LpSpace& s) {
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Halfspace> ||
                      std::is_same_v<T, Hyperplane>) {
          check_dim(v.normal, s);
          if (v.normal.cwiseAbs().maxCoeff() == 0.0)
            throw std::invalid_argument("set normal must be nonzero");
        } else if constexpr (std::is_same_v<T, Box>) {
          check_dim(v.lo, s);
          check_dim(v.hi, s);
          if ((v.lo.array() > v.hi.array()).any())
            throw std::invalid_argument("box requires lo <= hi componentwise");
        } else {
          if (!(v.radius > 0.0))
            throw std::invalid_argument("ball radius must be positive");
        }
      },
      set);
}

bool contains(const SetDescriptor& set, const Vec& x, const LpSpace& s,
              double tol) {
  check_dim(x, s);
  return std::visit(
      [&](const auto& v) -> bool {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Halfspace>) {
          return v.normal.dot(x) - v.offset <=
                 tol * scale_of(v.normal, x, v.offset, s);
        } else if constexpr (std::is_same_v<T, Hyperplane>) {
          return std::abs(v.normal.dot(x) - v.offset) <=
                 tol * scale_of(v.normal, x, v.offset, s);
        } else if constexpr (std::is_same_v<T, Box>) {
          for (Eigen::Index i = 0; i < x.size(); ++i) {
            const double sc = tol * std::max({1.0, std::abs(v.lo[i]),
                                              std::abs(v.hi[i])});
            if (x[i] < v.lo[i] - sc || x[i] > v.hi[i] + sc) return false;
          }
          return true;
        } else {
          return lp_norm(x, s) <= v.radius + tol * std::max(1.0, v.radius);
        }
      },
      set);
}

// --------------------------------------------------------------------------
// Metric projection

namespace {

// Projection onto the active hyperplane <n,xi> = c when <n,x> > c.
// Stationarity J^mu(x - xi) = lambda n gives xi(lambda) = x - G(lambda n)
// with G the inverse gauge map; <n, xi(lambda)> is strictly decreasing.
ProjectionResult metric_onto_plane(const Vec& n, double c, const Vec& x,
                                   const LpSpace& s,
                                   const GeometryConstants& gc) {
  ProjectionResult r;
  const double tol = gc.tol_kkt * scale_of(n, x, c, s);
  auto xi_of = [&](double lam) -> Vec { return x - inverse_gauge_map(lam * n, s); };
  auto h = [&](double lam) { return n.dot(xi_of(lam)) - c; };
  int iters = 0;
  const double lam = bisect_decreasing(h, tol, iters);
  r.point = xi_of(lam);
  r.multiplier = lam;
  r.vp_residual = std::abs(n.dot(r.point) - c);
  r.inner_iterations = iters;
  return r;
}

}  // namespace

ProjectionResult metric_project(const SetDescriptor& set, const Vec& x,
                                const LpSpace& s, const GeometryConstants& c) {
  validate(set, s);
  check_dim(x, s);
  return std::visit(
      [&](const auto& v) -> ProjectionResult {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Halfspace>) {
          if (v.normal.dot(x) <= v.offset) return {x, 0.0, 0.0, 0};
          return metric_onto_plane(v.normal, v.offset, x, s, c);
        } else if constexpr (std::is_same_v<T, Hyperplane>) {
          const double r0 = v.normal.dot(x) - v.offset;
          if (r0 == 0.0) return {x, 0.0, 0.0, 0};
          const double sg = r0 > 0.0 ? 1.0 : -1.0;
          return metric_onto_plane(sg * v.normal, sg * v.offset, x, s, c);
        } else if constexpr (std::is_same_v<T, Box>) {
          // exact for every p by separability of sum |x_i - xi_i|^p
          return {clamp(x, v), 0.0, 0.0, 0};
        } else {
          const double nx = lp_norm(x, s);
          if (nx <= v.radius) return {x, 0.0, 0.0, 0};
          ProjectionResult r;
          r.point = (v.radius / nx) * x;
          r.multiplier = std::pow(nx - v.radius, s.p - 1.0);
          return r;
        }
      },
      set);
}

// --------------------------------------------------------------------------
// Generalized (dual) projection

namespace {

// Projection onto the active hyperplane for min ||xi||^2 - 2<phi,xi>:
// stationarity J xi = phi - mu n gives xi(mu) = J*(phi - mu n), and
// <n, xi(mu)> is nonincreasing by monotonicity of J*.
ProjectionResult generalized_onto_plane(const Vec& n, double c, const Vec& phi,
                                        const LpSpace& s,
                                        const GeometryConstants& gc) {
  ProjectionResult r;
  const double tol = gc.tol_kkt * scale_of(n, phi, c, s);
  auto xi_of = [&](double mu) -> Vec { return inverse_duality_map(phi - mu * n, s); };
  auto h = [&](double mu) { return n.dot(xi_of(mu)) - c; };
  int iters = 0;
  const double mu = bisect_decreasing(h, tol, iters);
  r.point = xi_of(mu);
  r.multiplier = mu;
  r.vp_residual = std::abs(n.dot(r.point) - c);
  r.inner_iterations = iters;
  return r;
}

// Box case of min ||xi||^2 - 2<phi,xi>. The norm factor in J couples the
// coordinates only through t = ||xi||_p: for fixed t the componentwise
// optimality condition is xi_i = clamp(sgn(phi_i)|phi_i t^{p-2}|^{1/(p-1)}),
// so it suffices to find the scalar fixed point ||xi(t)||_p = t. Any such t
// gives an exact KKT point, hence the unique minimizer by strict convexity.
ProjectionResult generalized_onto_box(const Box& b, const Vec& phi,
                                      const LpSpace& s,
                                      const GeometryConstants& gc) {
  (void)gc;
  ProjectionResult r;
  if (s.p == 2.0) {
    r.point = clamp(phi, b);
    r.vp_residual = box_kkt_residual(r.point, phi, b, s);
    return r;
  }
  const double e = 1.0 / (s.p - 1.0);
  auto xi_of = [&](double t) -> Vec {
    const double tf = std::pow(t, s.p - 2.0);
    Vec xi(phi.size());
    for (Eigen::Index i = 0; i < phi.size(); ++i) {
      const double u = phi[i] == 0.0 ? 0.0 : signed_pow(phi[i] * tf, e);
      xi[i] = std::min(std::max(u, b.lo[i]), b.hi[i]);
    }
    return xi;
  };
  auto g = [&](double t) { return lp_norm(xi_of(t), s) - t; };

  const double scale = std::max(1.0, dual_norm(phi, s));
  double tlo = 1e-12 * scale;
  int iters = 0;
  if (g(tlo) <= 0.0) {
    // the only member reachable is (numerically) the zero-norm corner
    r.point = xi_of(tlo);
    r.vp_residual = box_kkt_residual(r.point, phi, b, s);
    return r;
  }
  double thi = scale;
  while (g(thi) > 0.0 && iters < 200) {
    thi *= 2.0;
    ++iters;
  }
  if (g(thi) > 0.0)
    throw std::runtime_error("generalized box projection: no bracket");
  for (int k = 0; k < 200 && (thi - tlo) > 1e-16 * thi; ++k, ++iters) {
    const double mid = 0.5 * (tlo + thi);
    (g(mid) > 0.0 ? tlo : thi) = mid;
  }
  r.point = xi_of(0.5 * (tlo + thi));
  r.multiplier = 0.0;  // no single multiplier for a box
  r.vp_residual = box_kkt_residual(r.point, phi, b, s);
  r.inner_iterations = iters;
  return r;
}

}  // namespace

ProjectionResult generalized_project_dual(const SetDescriptor& set,
                                          const Vec& phi, const LpSpace& s,
                                          const GeometryConstants& c) {
  validate(set, s);
  check_dim(phi, s);
  const Vec z = inverse_duality_map(phi, s);  // unconstrained optimum
  return std::visit(
      [&](const auto& v) -> ProjectionResult {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Halfspace>) {
          if (v.normal.dot(z) <= v.offset) return {z, 0.0, 0.0, 0};
          return generalized_onto_plane(v.normal, v.offset, phi, s, c);
        } else if constexpr (std::is_same_v<T, Hyperplane>) {
          const double r0 = v.normal.dot(z) - v.offset;
          if (r0 == 0.0) return {z, 0.0, 0.0, 0};
          const double sg = r0 > 0.0 ? 1.0 : -1.0;
          return generalized_onto_plane(sg * v.normal, sg * v.offset, phi, s, c);
        } else if constexpr (std::is_same_v<T, Box>) {
          if (contains(set, z, s, 0.0)) return {z, 0.0, 0.0, 0};
          return generalized_onto_box(v, phi, s, c);
        } else {
          const double m = lp_norm(z, s);
          if (m <= v.radius) return {z, 0.0, 0.0, 0};
          ProjectionResult r;
          r.point = (v.radius / m) * z;  // KKT forces J xi parallel to phi
          r.multiplier = m - v.radius;
          return r;
        }
      },
      set);
}

double hausdorff_parallel_halfspaces(const Halfspace& h1, const Halfspace& h2,
                                     const LpSpace& s) {
  check_dim(h1.normal, s);
  check_dim(h2.normal, s);
  if ((h1.normal - h2.normal).cwiseAbs().maxCoeff() >
      1e-12 * h1.normal.cwiseAbs().maxCoeff())
    throw std::invalid_argument(
        "hausdorff_parallel_halfspaces: normals must coincide");
  return std::abs(h1.offset - h2.offset) / dual_norm(h1.normal, s);
}

std::vector<Vec> sample_feasible(const SetDescriptor& set, const LpSpace& s,
                                 std::mt19937_64& rng, int count) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  auto draw = [&] {
    Vec z(s.dim);
    for (Eigen::Index i = 0; i < s.dim; ++i) z[i] = u(rng);
    return z;
  };
  std::vector<Vec> out;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Halfspace> ||
                      std::is_same_v<T, Hyperplane>) {
          const double nn = v.normal.squaredNorm();
          for (int k = 0; k < count; ++k) {
            Vec z = draw();
            z -= v.normal * ((v.normal.dot(z) - v.offset) / nn);
            out.push_back(z);  // on the boundary hyperplane
            if constexpr (std::is_same_v<T, Halfspace>) {
              // interior point strictly inside the halfspace
              out.push_back(z - v.normal * (u01(rng) / std::sqrt(nn)));
            }
          }
        } else if constexpr (std::is_same_v<T, Box>) {
          if (s.dim <= 10) {
            for (std::uint64_t mask = 0; mask < (1ull << s.dim); ++mask) {
              Vec z(s.dim);
              for (Eigen::Index i = 0; i < s.dim; ++i)
                z[i] = (mask >> i) & 1 ? v.hi[i] : v.lo[i];
              out.push_back(z);
            }
          }
          for (int k = 0; k < count; ++k) {
            Vec z(s.dim);
            for (Eigen::Index i = 0; i < s.dim; ++i)
              z[i] = v.lo[i] + u01(rng) * (v.hi[i] - v.lo[i]);
            out.push_back(z);
          }
        } else {
          out.push_back(Vec::Zero(s.dim));
          for (int k = 0; k < count; ++k) {
            Vec z = draw();
            const double nz = lp_norm_any(z, s.p);
            if (nz == 0.0) continue;
            out.push_back(z * (v.radius / nz));          // boundary
            out.push_back(z * (v.radius * u01(rng) / nz));  // interior
          }
        }
      },
      set);
  return out;
}

}  // namespace lpproj
