#pragma once

#include <functional>

#include "oadmm/agent/links.hpp"

namespace oadmm::agent {

/// Per-agent trajectory-optimization problem: reference-tracking objective,
/// dynamics model, input box, and the feasibility projection implied by
/// single-shooting rollout of the inputs.
struct LocalProblem {
  DynamicsModel model = DynamicsModel::kBicycle;
  int horizon = 30;
  double dt = 0.05;
  BicycleParams bicycle;

  // input box: (a, beta) for bicycle, (ax, ay) for holonomic
  Eigen::Vector2d input_lower{-3.0, -0.6};
  Eigen::Vector2d input_upper{3.0, 0.6};

  // tracking-cost weights
  double q_v = 1.0;
  double q_lat = 4.0;
  double r_a = 0.1;
  double r_beta = 0.5;
  double v_ref = 4.0;                     // bicycle speed reference (m/s)
  Eigen::Vector2d v_ref_vec{0.0, 0.0};    // holonomic velocity reference

  /// Unsigned distance from a point to the reference path; when grad is
  /// non-null it receives the gradient (unit vector away from the path,
  /// zero on the path).
  std::function<double(const Eigen::Vector2d&, Eigen::Vector2d*)>
      lateral_distance;

  // subsolver controls
  double tolerance = 2e-3;
  int max_iterations = 60;
};

/// One elementwise pull term lambda'(x - z) + sum_c rho_c (x_c - z_c)^2 on
/// the flattened plan. The x-update collects the self link plus the remote
/// side of every neighbor link.
struct ConsensusPull {
  const Eigen::VectorXd* lambda = nullptr;
  const Eigen::VectorXd* z = nullptr;
  const Eigen::VectorXd* rho = nullptr;
};

struct XObjective {
  double value = 0.0;
  Eigen::MatrixXd input_gradient;  // horizon x 2
};

/// Reduced-Lagrangian value (and optionally its analytic input gradient via
/// the rollout adjoint) at the plan produced by `inputs`.
XObjective x_objective(const LocalProblem& local, const VehicleState& start,
                       const Eigen::MatrixXd& inputs,
                       const std::vector<ConsensusPull>& pulls,
                       bool want_gradient);

struct XUpdateResult {
  TrajectoryPlan plan;
  Eigen::MatrixXd inputs;
  bool degraded = false;
  double projected_gradient_norm = 0.0;
};

/// Trajectory optimization: projected gradient with backtracking over the
/// input sequence, dynamics enforced by rollout (single shooting). On
/// subsolver failure the warm-start plan is kept and `degraded` is set.
XUpdateResult x_update(const LocalProblem& local, const VehicleState& start,
                       const Eigen::MatrixXd& warm_inputs,
                       const SelfLink& self_link,
                       const std::vector<NeighborLink>& links);

std::vector<ConsensusPull> collect_x_pulls(const SelfLink& self_link,
                                           const std::vector<NeighborLink>& links);

}  // namespace oadmm::agent
