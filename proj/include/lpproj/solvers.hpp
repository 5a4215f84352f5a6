#pragma once

// Iterative algorithms: successive generalized projections for convex
// feasibility, the projection iterations for variational inequalities,
// the unconstrained duality iteration, the subgradient schemes and the
// Hausdorff stability experiment.

#include <Eigen/Dense>
#include <functional>
#include <optional>

#include "lpproj/projections.hpp"

namespace lpproj {

/// Monotone affine variational inequality: find x in the feasible set with
/// <Ax - f, xi - x> >= 0 for all feasible xi, where A x = M x + b.
struct VIProblem {
  Eigen::MatrixXd M;
  Vec b;
  Vec f;
  SetDescriptor feasible_set;

  VIProblem(Eigen::MatrixXd M_, Vec b_, Vec f_, SetDescriptor set_,
            double tol = 1e-10);

  Vec apply(const Vec& x) const { return M * x + b; }
};

struct StepSchedule {
  enum class Kind { constant, harmonic } kind = Kind::constant;
  double alpha0 = 1.0;

  double at(int n) const {
    return kind == Kind::constant ? alpha0 : alpha0 / (n + 1);
  }
};

struct IterRecord {
  int n = 0;
  Vec x;
  double v2_to_ref = 0.0;  // V2(Jx_n, xi_ref) when a reference point is known
  double step_norm = 0.0;
  double fixed_point_residual = 0.0;
  double vi_residual = 0.0;
};

struct IterTrace {
  std::vector<IterRecord> records;
  bool converged = false;
  int iterations = 0;
};

struct AltProjResult {
  IterTrace trace;
  std::vector<double> elementary_gaps;  // V2(Jx_k, x_{k+1}) per elementary step
  double gap_partial_sum = 0.0;
  Vec final_point;
};

/// Method of successive generalized projections: one composite sweep
/// Pi_1 o ... o Pi_m (Pi_m applied first) per outer iteration. xi_ref is a
/// known common point used for the V2 monotonicity record; monotonicity
/// failure beyond tolerance signals an infeasible instance (or a bug).
AltProjResult alternating_generalized_projections(
    const std::vector<SetDescriptor>& sets, const Vec& x0, const Vec& xi_ref,
    const LpSpace& s, const GeometryConstants& c, int max_sweeps, double tol);

/// VI iteration x_{n+1} = pi_Omega(J x_n - alpha_n (A x_n - f)).
IterTrace vi_iterate_generalized(const VIProblem& prob, const Vec& x0,
                                 const StepSchedule& sched, const LpSpace& s,
                                 const GeometryConstants& c, int max_iter,
                                 double tol);

/// Experimental iteration x_{n+1} = P_Omega(x_n - alpha_n J*(A x_n - f)).
/// No convergence contract for p != 2; divergence is an expected outcome
/// reported through the trace, not an error.
IterTrace vi_iterate_metric(const VIProblem& prob, const Vec& x0,
                            const StepSchedule& sched, const LpSpace& s,
                            const GeometryConstants& c, int max_iter,
                            double tol);

/// Unconstrained duality iteration J x_{n+1} = J x_n - alpha_n (A x_n - f);
/// solves A x = f when it converges.
IterTrace unconstrained_duality_iteration(const VIProblem& prob, const Vec& x0,
                                          const StepSchedule& sched,
                                          const LpSpace& s,
                                          const GeometryConstants& c,
                                          int max_iter, double tol);

struct ConvexFunctional {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> subgradient;  // an element of B*
};

enum class SubgradScheme { normalized_residual, normalized_subgradient, polyak };

/// The three pi_Omega-based subgradient schemes for min u(x) over the set.
/// The polyak scheme needs the optimal value u_star. A zero subgradient
/// stops the iteration as already optimal.
IterTrace subgradient_minimize(const ConvexFunctional& u,
                               std::optional<double> u_star,
                               const SetDescriptor& set, const Vec& x0,
                               SubgradScheme scheme, const StepSchedule& sched,
                               const LpSpace& s, const GeometryConstants& c,
                               int max_iter, double tol);

/// Hausdorff stability of Pi_Omega under a parallel-halfspace perturbation:
/// margin of ||xhat1 - xhat2|| <= C1 delta_B^{-1}(4 L C2 sigma).
PropertyMargins stability_experiment(const Halfspace& omega1,
                                     const Halfspace& omega2, const Vec& x,
                                     const LpSpace& s,
                                     const GeometryConstants& c = {});

/// Thrown when an iteration exceeds the divergence bound
/// ||x_n|| > 1e6 (1 + ||x0||).
struct DivergenceSignal : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace lpproj
