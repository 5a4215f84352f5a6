#include "lpproj/solvers.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace lpproj {

VIProblem::VIProblem(Eigen::MatrixXd M_, Vec b_, Vec f_, SetDescriptor set_,
                     double tol)
    : M(std::move(M_)), b(std::move(b_)), f(std::move(f_)),
      feasible_set(std::move(set_)) {
  if (M.rows() != M.cols() || b.size() != M.rows() || f.size() != M.rows())
    throw std::invalid_argument("VIProblem: inconsistent dimensions");
  Eigen::MatrixXd sym = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  if (es.eigenvalues().minCoeff() < -tol)
    throw std::invalid_argument("VIProblem: M + M^T must be positive semidefinite");
}

namespace {

void check_divergence(const Vec& x, double x0_norm) {
  if (x.cwiseAbs().maxCoeff() > 1e6 * (1.0 + x0_norm))
    throw DivergenceSignal("iteration exceeded the divergence bound");
}

double vi_residual_at(const VIProblem& prob, const Vec& x,
                      const std::vector<Vec>& test_points) {
  const Vec r = prob.apply(x) - prob.f;
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& xi : test_points) worst = std::min(worst, r.dot(xi - x));
  return worst;
}

std::vector<Vec> vi_test_points(const VIProblem& prob, const LpSpace& s) {
  std::mt19937_64 rng(0x9e3779b97f4a7c15ull);  // fixed: traces stay deterministic
  return sample_feasible(prob.feasible_set, s, rng, 64);
}

}  // namespace

AltProjResult alternating_generalized_projections(
    const std::vector<SetDescriptor>& sets, const Vec& x0, const Vec& xi_ref,
    const LpSpace& s, const GeometryConstants& c, int max_sweeps, double tol) {
  if (sets.empty()) throw std::invalid_argument("need at least one set");
  AltProjResult out;
  Vec x = x0;
  double v2_prev = v2(x, xi_ref, s).value;
  {
    IterRecord r0;
    r0.n = 0;
    r0.x = x;
    r0.v2_to_ref = v2_prev;
    out.trace.records.push_back(r0);
  }
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    const Vec sweep_start = x;
    // composite sweep: Pi_m applied first, Pi_1 last
    for (auto it = sets.rbegin(); it != sets.rend(); ++it) {
      const Vec next = generalized_project_dual(*it, duality_map(x, s), s, c).point;
      const double gap = v2(x, next, s).value;
      out.elementary_gaps.push_back(gap);
      out.gap_partial_sum += gap;
      x = next;
    }
    const double v2_now = v2(x, xi_ref, s).value;
    if (v2_now > v2_prev + 1e-10 * std::max(1.0, v2_prev))
      throw std::runtime_error(
          "V2 monotonicity violated: infeasible instance or projection failure");
    v2_prev = v2_now;
    IterRecord r;
    r.n = sweep;
    r.x = x;
    r.v2_to_ref = v2_now;
    r.step_norm = lp_norm(x - sweep_start, s);
    r.fixed_point_residual = r.step_norm;
    out.trace.records.push_back(r);
    out.trace.iterations = sweep;
    if (r.step_norm <= tol) {
      out.trace.converged = true;
      break;
    }
  }
  out.final_point = x;
  return out;
}

namespace {

// Shared driver for the two constrained VI iterations; `advance` maps
// (x, alpha) to the next iterate.
IterTrace run_vi(const VIProblem& prob, const Vec& x0,
                 const StepSchedule& sched, const LpSpace& s, int max_iter,
                 double tol,
                 const std::function<Vec(const Vec&, double)>& advance) {
  IterTrace trace;
  const auto test_points = vi_test_points(prob, s);
  const double x0_norm = lp_norm(x0, s);
  Vec x = x0;
  for (int n = 0; n < max_iter; ++n) {
    const Vec next = advance(x, sched.at(n));
    IterRecord r;
    r.n = n;
    r.x = x;
    r.step_norm = lp_norm(next - x, s);
    r.fixed_point_residual = r.step_norm;
    r.vi_residual = vi_residual_at(prob, x, test_points);
    trace.records.push_back(r);
    trace.iterations = n + 1;
    if (r.fixed_point_residual <= tol) {
      trace.converged = true;
      break;
    }
    x = next;
    check_divergence(x, x0_norm);
  }
  return trace;
}

}  // namespace

IterTrace vi_iterate_generalized(const VIProblem& prob, const Vec& x0,
                                 const StepSchedule& sched, const LpSpace& s,
                                 const GeometryConstants& c, int max_iter,
                                 double tol) {
  return run_vi(prob, x0, sched, s, max_iter, tol,
                [&](const Vec& x, double alpha) {
                  const Vec g = duality_map(x, s) - alpha * (prob.apply(x) - prob.f);
                  return generalized_project_dual(prob.feasible_set, g, s, c).point;
                });
}

IterTrace vi_iterate_metric(const VIProblem& prob, const Vec& x0,
                            const StepSchedule& sched, const LpSpace& s,
                            const GeometryConstants& c, int max_iter,
                            double tol) {
  return run_vi(prob, x0, sched, s, max_iter, tol,
                [&](const Vec& x, double alpha) {
                  const Vec g =
                      x - alpha * inverse_duality_map(prob.apply(x) - prob.f, s);
                  return metric_project(prob.feasible_set, g, s, c).point;
                });
}

IterTrace unconstrained_duality_iteration(const VIProblem& prob, const Vec& x0,
                                          const StepSchedule& sched,
                                          const LpSpace& s,
                                          const GeometryConstants& c,
                                          int max_iter, double tol) {
  (void)c;
  IterTrace trace;
  const double x0_norm = lp_norm(x0, s);
  Vec x = x0;
  for (int n = 0; n < max_iter; ++n) {
    const Vec resid = prob.apply(x) - prob.f;
    IterRecord r;
    r.n = n;
    r.x = x;
    r.vi_residual = dual_norm(resid, s);
    if (r.vi_residual <= tol) {
      r.fixed_point_residual = 0.0;
      trace.records.push_back(r);
      trace.iterations = n + 1;
      trace.converged = true;
      return trace;
    }
    const Vec next = inverse_duality_map(duality_map(x, s) - sched.at(n) * resid, s);
    r.step_norm = lp_norm(next - x, s);
    r.fixed_point_residual = r.step_norm;
    trace.records.push_back(r);
    trace.iterations = n + 1;
    x = next;
    check_divergence(x, x0_norm);
  }
  return trace;
}

IterTrace subgradient_minimize(const ConvexFunctional& u,
                               std::optional<double> u_star,
                               const SetDescriptor& set, const Vec& x0,
                               SubgradScheme scheme, const StepSchedule& sched,
                               const LpSpace& s, const GeometryConstants& c,
                               int max_iter, double tol) {
  if (scheme == SubgradScheme::polyak && !u_star)
    throw std::invalid_argument("polyak scheme requires u_star");
  IterTrace trace;
  const double x0_norm = lp_norm(x0, s);
  Vec x = x0;
  for (int n = 0; n < max_iter; ++n) {
    const double val = u.value(x);
    const Vec g = u.subgradient(x);
    const double gn = dual_norm(g, s);
    IterRecord r;
    r.n = n;
    r.x = x;
    r.vi_residual = u_star ? val - *u_star : val;
    if (gn == 0.0 || (u_star && val - *u_star <= tol)) {
      trace.records.push_back(r);
      trace.iterations = n + 1;
      trace.converged = true;
      return trace;
    }
    double coeff;
    switch (scheme) {
      case SubgradScheme::normalized_residual:
      case SubgradScheme::normalized_subgradient:
        coeff = sched.at(n) / gn;
        break;
      case SubgradScheme::polyak:
        coeff = sched.at(n) * (val - *u_star) / (gn * gn);
        break;
    }
    const Vec next =
        generalized_project_dual(set, duality_map(x, s) - coeff * g, s, c).point;
    r.step_norm = lp_norm(next - x, s);
    r.fixed_point_residual = r.step_norm;
    trace.records.push_back(r);
    trace.iterations = n + 1;
    x = next;
    check_divergence(x, x0_norm);
  }
  return trace;
}

PropertyMargins stability_experiment(const Halfspace& omega1,
                                     const Halfspace& omega2, const Vec& x,
                                     const LpSpace& s,
                                     const GeometryConstants& c) {
  const double sigma = hausdorff_parallel_halfspaces(omega1, omega2, s);
  const Vec jx = duality_map(x, s);
  const Vec x1 = generalized_project_dual(SetDescriptor{omega1}, jx, s, c).point;
  const Vec x2 = generalized_project_dual(SetDescriptor{omega2}, jx, s, c).point;
  const double dist = lp_norm(x1 - x2, s);
  const double C1 = 2.0 * std::max({1.0, lp_norm(x1, s), lp_norm(x2, s)});
  const double C2 = 2.0 * std::max(dual_norm(jx - duality_map(x1, s), s),
                                   dual_norm(jx - duality_map(x2, s), s));
  const double bound =
      C1 * modulus_convexity_lower_inv(4.0 * c.figiel_L * C2 * sigma, s);
  PropertyMargins m;
  m["sigma"] = sigma;
  m["distance"] = dist;
  m["bound"] = bound;
  m["g6"] = bound - dist;
  m["ratio"] = sigma > 0.0 ? dist / sigma : 0.0;
  return m;
}

}  // namespace lpproj
