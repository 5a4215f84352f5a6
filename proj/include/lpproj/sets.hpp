#pragma once

// Convex closed set descriptors and their projection subproblems: the
// metric projection min ||x - xi||_p and the generalized (dual) projection
// min ||xi||^2 - 2<phi, xi>, each reduced to a componentwise formula or a
// scalar KKT root-find where the structure allows.

#include <cstdint>
#include <random>
#include <variant>
#include <vector>

#include "lpproj/duality.hpp"

namespace lpproj {

/// { xi : <n, xi> <= c }
struct Halfspace {
  Vec normal;
  double offset;
};

/// { xi : <n, xi> = c }
struct Hyperplane {
  Vec normal;
  double offset;
};

/// { xi : lo <= xi <= hi } componentwise
struct Box {
  Vec lo;
  Vec hi;
};

/// { xi : ||xi||_p <= r }
struct NormBall {
  double radius;
};

using SetDescriptor = std::variant<Halfspace, Hyperplane, Box, NormBall>;

struct ProjectionResult {
  Vec point;
  double multiplier = 0.0;   // KKT multiplier; 0 when the constraint is inactive
  double vp_residual = 0.0;  // variational-principle violation at the result
  int inner_iterations = 0;
};

void validate(const SetDescriptor& set, const LpSpace& s);

bool contains(const SetDescriptor& set, const Vec& x, const LpSpace& s,
              double tol);

/// Metric projection P_Omega x: the minimizer of ||x - xi||_p over the set.
ProjectionResult metric_project(const SetDescriptor& set, const Vec& x,
                                const LpSpace& s,
                                const GeometryConstants& c = {});

/// Generalized projection of the dual element phi: the minimizer of
/// V4(phi, xi) = ||phi||^2 - 2<phi, xi> + ||xi||^2 over the set.
ProjectionResult generalized_project_dual(const SetDescriptor& set,
                                          const Vec& phi, const LpSpace& s,
                                          const GeometryConstants& c = {});

/// Hausdorff distance between two parallel halfspaces, |c1-c2| / ||n||_{B*}.
double hausdorff_parallel_halfspaces(const Halfspace& h1, const Halfspace& h2,
                                     const LpSpace& s);

/// Feasible test points for variational-principle checks: KKT-relevant
/// boundary points plus random members of the set.
std::vector<Vec> sample_feasible(const SetDescriptor& set, const LpSpace& s,
                                 std::mt19937_64& rng, int count);

}  // namespace lpproj
