#pragma once

#include <vector>

#include "oadmm/agent/trajectory.hpp"

namespace oadmm::agent {

/// Adaptation-function parameters (penalty from physical clearance).
struct PhiConfig {
  double min_distance = 4.0;  // D: clearance scale below which pressure rises
  double weight = 1.0;        // w_i: agent importance
  double exponent = 2.0;      // a: shaping exponent
  double phi_min = 0.05;
  double phi_max = 10.0;
  /// Apply the exponent a second time inside the self-penalty mean, exactly
  /// as the update is written; disable for sensitivity studies.
  bool self_second_exponent = true;

  void validate() const;
};

/// Similarity-function parameters (multiplier forgetting between steps).
struct MuConfig {
  double eta = 0.5;  // filter coefficient in [0,1]
  // weights of the offline similarity estimator; must sum to 1
  double w_x = 0.25;
  double w_z = 0.25;
  double w_lambda = 0.25;
  double w_rho = 0.25;

  void validate() const;
};

/// Consensus state for this agent's own plan: z_ii, lambda_ii, rho_ii.
/// rho and mu are held per horizon step and broadcast across the state
/// components of a step unless the agent runs with per-component penalties.
struct SelfLink {
  Eigen::VectorXd z;       // z_ii, flattened-plan layout
  Eigen::VectorXd lambda;  // lambda_ii
  Eigen::VectorXd rho;     // rho_ii
  Eigen::VectorXd mu;      // filter state for lambda_ii
};

/// All coupling state between this agent (i) and one neighbor (j).
/// "local" fields are i's opinion about j (z_ij, lambda_ij, rho_ij); the
/// "remote" fields are what j sent about i (z_ji, lambda_ji, rho_ji). After
/// every communication round both ends agree on the exchanged fields.
struct NeighborLink {
  int neighbor_id = -1;

  Eigen::VectorXd z_local;       // z_ij
  Eigen::VectorXd lambda_local;  // lambda_ij
  Eigen::VectorXd rho_local;     // rho_ij
  Eigen::VectorXd mu_local;      // filter state for lambda_ij

  Eigen::VectorXd z_remote;       // z_ji
  Eigen::VectorXd lambda_remote;  // lambda_ji
  Eigen::VectorXd rho_remote;     // rho_ji

  TrajectoryPlan neighbor_plan;   // x_j from the last plan exchange
  geom::CapsuleTemplate neighbor_shape;
};

/// Expands a per-step vector (length = horizon) to flattened-plan length.
Eigen::VectorXd broadcast_steps(const Eigen::VectorXd& per_step, int state_dim);

}  // namespace oadmm::agent
