#pragma once

#include "oadmm/agent/links.hpp"
#include "oadmm/geometry/halfspace.hpp"

namespace oadmm::agent {

struct ZUpdateOptions {
  double margin = 0.02;         // extra clearance enforced by the linearization (m)
  double slack_weight = 100.0;  // penalty on constraint slack (10 * phi_max)
};

struct ZUpdateResult {
  Eigen::VectorXd z_self;                     // z_ii
  std::vector<Eigen::VectorXd> z_neighbors;   // z_ij, parallel to the links
  bool constrained = false;  // at least one separation constraint was active
  bool relaxed = false;      // slack fallback used on an infeasible step
};

/// Copy optimization: minimizes the copy Lagrangian subject to per-step
/// linearized separation between the own copy and each neighbor copy.
/// The unconstrained minimizer z = x + lambda/(2 rho) is returned unchanged
/// when every per-step capsule clearance at that minimizer is >= 0;
/// otherwise halfspaces are rebuilt at the incoming plans and the copies
/// are projected per step.
ZUpdateResult z_update(const TrajectoryPlan& own_plan,
                       const geom::CapsuleTemplate& own_shape,
                       const SelfLink& self_link,
                       const std::vector<NeighborLink>& links,
                       const ZUpdateOptions& options);

}  // namespace oadmm::agent
