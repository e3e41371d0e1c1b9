#pragma once

#include <map>

#include "oadmm/agent/copy_qp.hpp"
#include "oadmm/agent/local_problem.hpp"
#include "oadmm/agent/similarity.hpp"

namespace oadmm::agent {

struct AgentConfig {
  LocalProblem local;
  geom::CapsuleTemplate shape;
  PhiConfig phi;
  MuConfig mu;
  int iterations_per_step = 1;
  double z_margin = 0.02;
  /// Fixed-penalty ADMM mode: rho stays at the agent weight and mu is
  /// pinned to 1 (used as the sweep baseline).
  bool fixed_penalty = false;
};

/// Plan broadcast after the x-update.
struct PlanMessage {
  int from = -1;
  Eigen::VectorXd plan_flat;
  Eigen::VectorXd headings;
  geom::CapsuleTemplate shape;
  DynamicsModel model = DynamicsModel::kBicycle;
  double dt = 0.05;
};

/// Copy/multiplier/penalty exchange after the rho-update. The sender's
/// (z_ij, lambda_ij, rho_ij) become the receiver's remote link fields.
struct LinkMessage {
  int from = -1;
  int to = -1;
  Eigen::VectorXd z;
  Eigen::VectorXd lambda;
  Eigen::VectorXd rho;
};

/// One vehicle's OA-ADMM MPC state machine. The world drives the per-tick
/// sequence: begin_step, then per iteration x-update / plan exchange /
/// z-update / lambda-update / rho-update / link exchange, then first_input.
class OaAdmmAgent {
 public:
  OaAdmmAgent(int id, AgentConfig config, const VehicleState& initial);

  int id() const { return id_; }

  // --- control-step lifecycle -------------------------------------------
  void begin_step(const VehicleState& measured);
  void run_x_update();
  PlanMessage plan_message() const;
  void receive_plan(const PlanMessage& message);
  void run_z_update();
  void run_lambda_update();
  void run_rho_update();
  LinkMessage link_message(int neighbor) const;
  void receive_link(const LinkMessage& message);
  void end_iteration();
  Eigen::Vector2d first_input() const { return inputs_.row(0); }

  // --- link management ---------------------------------------------------
  bool has_link(int neighbor) const;
  void ensure_link(const PlanMessage& hello);
  void remove_link(int neighbor);

  // --- inspection ----------------------------------------------------------
  const TrajectoryPlan& plan() const { return plan_; }
  const SelfLink& self_link() const { return self_; }
  const std::vector<NeighborLink>& links() const { return links_; }
  const AgentConfig& config() const { return config_; }
  bool degraded_step() const { return degraded_; }
  bool relaxed_z() const { return last_z_relaxed_; }
  double projected_gradient_norm() const { return last_pg_norm_; }
  /// ||x - z_ii||_inf after the latest iteration (self consensus residual).
  double self_residual() const;

 private:
  NeighborLink& link_ref(int neighbor);
  int flat_size() const;
  Eigen::VectorXd broadcast(const Eigen::VectorXd& per_step) const;

  int id_ = -1;
  AgentConfig config_;
  VehicleState measured_;
  TrajectoryPlan plan_;
  Eigen::MatrixXd inputs_;
  SelfLink self_;
  std::vector<NeighborLink> links_;
  ZUpdateResult last_z_;
  bool first_iteration_ = true;
  bool degraded_ = false;
  bool last_z_relaxed_ = false;
  double last_pg_norm_ = 0.0;
};

}  // namespace oadmm::agent
