#pragma once

#include <optional>

#include "oadmm/core/solver.hpp"

namespace oadmm::core {

/// Elementwise bounds for box-constrained subproblems.
struct BoxBounds {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

/// Exact x-update for quadratic f(x) = 0.5 x'Px + q'x: solves the normal
/// equations (P + A'R^2 A) x = -q - A'lambda - A'R^2(Bz - c) by LDLT.
XSubsolver exact_quadratic_x_subsolver(Eigen::MatrixXd P, Eigen::VectorXd q);

/// Exact z-update for quadratic g(z) = 0.5 z'Qz + r'z.
ZSubsolver exact_quadratic_z_subsolver(Eigen::MatrixXd Q, Eigen::VectorXd r);

struct ProjectedGradientOptions {
  double tolerance = 1e-10;   // projected-gradient infinity norm
  int max_iterations = 5000;
  std::optional<BoxBounds> box;  // empty = unconstrained
};

/// Projected gradient with Armijo backtracking on the augmented Lagrangian,
/// using the problem's gradient callables. Suitable for box-constrained
/// quadratic (or general smooth convex) subproblems.
XSubsolver projected_gradient_x_subsolver(ProjectedGradientOptions options = {});
ZSubsolver projected_gradient_z_subsolver(ProjectedGradientOptions options = {});

}  // namespace oadmm::core
