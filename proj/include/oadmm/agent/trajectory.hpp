#pragma once

#include <vector>

#include "oadmm/agent/dynamics.hpp"
#include "oadmm/geometry/capsule.hpp"

namespace oadmm::agent {

/// Finite-horizon state sequence (the per-agent MPC decision variable).
///
/// Per-step rows:
///   bicycle:   [x, y, v, a, beta]   (a, beta: inputs applied at that step)
///   holonomic: [x, y, vx, vy]
struct TrajectoryPlan {
  DynamicsModel model = DynamicsModel::kBicycle;
  double dt = 0.05;
  Eigen::MatrixXd states;     // horizon x state_dim
  Eigen::VectorXd headings;   // horizon; capsule axis per step

  int horizon() const { return static_cast<int>(states.rows()); }
  int state_dim() const { return static_cast<int>(states.cols()); }

  static int state_dim_for(DynamicsModel model) {
    return model == DynamicsModel::kBicycle ? 5 : 4;
  }

  /// Row-major concatenation of the per-step states.
  Eigen::VectorXd flatten() const;

  /// Rebuilds a plan from a flattened vector; headings are derived from
  /// consecutive positions, falling back to `fallback_headings` where the
  /// displacement is degenerate.
  static TrajectoryPlan unflatten(DynamicsModel model, double dt,
                                  const Eigen::VectorXd& flat,
                                  const Eigen::VectorXd& fallback_headings);

  std::vector<geom::Pose2> poses() const;

  Eigen::Vector2d position(int step) const {
    return states.row(step).head<2>();
  }
};

/// Heading per position from forward differences; entries with a step
/// displacement below 1e-9 reuse the previous heading (or the fallback).
Eigen::VectorXd derive_headings(const Eigen::MatrixXd& positions,
                                const Eigen::VectorXd& fallback);

/// Rolls inputs (horizon x 2) out from `start` with forward-Euler dynamics.
TrajectoryPlan rollout(const VehicleState& start, const Eigen::MatrixXd& inputs,
                       double dt, const BicycleParams& params);

/// Per-step clearance between two plans with the given capsule templates.
/// Throws std::invalid_argument on horizon mismatch.
Eigen::VectorXd clearance_along_plans(const TrajectoryPlan& plan_i,
                                      const TrajectoryPlan& plan_j,
                                      const geom::CapsuleTemplate& shape_i,
                                      const geom::CapsuleTemplate& shape_j);

}  // namespace oadmm::agent
