#pragma once

#include "oadmm/agent/links.hpp"

namespace oadmm::agent {

/// Penalty value for one horizon step from the capsule clearance at that
/// step: w * clamp((D/d)^a, phi_min, phi_max), with d <= 0 mapping to the
/// upper clamp. Strictly positive and bounded by construction.
double phi_from_clearance(double clearance, const PhiConfig& cfg);

/// Pair adaptation (rho_ij): per-horizon-step penalties from the clearances
/// between the two plans.
Eigen::VectorXd phi_pair(const TrajectoryPlan& plan_i,
                         const TrajectoryPlan& plan_j,
                         const geom::CapsuleTemplate& shape_i,
                         const geom::CapsuleTemplate& shape_j,
                         const PhiConfig& cfg);

/// Same, from precomputed per-step clearances.
Eigen::VectorXd phi_pair_from_clearances(const Eigen::VectorXd& clearances,
                                         const PhiConfig& cfg);

/// Self adaptation (rho_ii): w * mean_j (phi_ij)^a per step, clamped to
/// [w*phi_min, w*phi_max]. With no neighbors returns w*phi_min.
Eigen::VectorXd phi_self(const std::vector<Eigen::VectorXd>& neighbor_phis,
                         Eigen::Index horizon, const PhiConfig& cfg);

}  // namespace oadmm::agent
