#include <algorithm>
#include <stdexcept>

#include "oadmm/agent/adaptation.hpp"
#include "oadmm/agent/oadmm_agent.hpp"

namespace oadmm::agent {

OaAdmmAgent::OaAdmmAgent(int id, AgentConfig config, const VehicleState& initial)
    : id_(id), config_(std::move(config)), measured_(initial) {
  config_.phi.validate();
  config_.mu.validate();
  inputs_ = Eigen::MatrixXd::Zero(config_.local.horizon, 2);
  plan_ = rollout(measured_, inputs_, config_.local.dt, config_.local.bicycle);

  const int n = flat_size();
  self_.z = plan_.flatten();
  self_.lambda = Eigen::VectorXd::Zero(n);
  self_.rho = Eigen::VectorXd::Constant(
      n, config_.phi.weight * config_.phi.phi_min);
  self_.mu = Eigen::VectorXd::Ones(n);
}

int OaAdmmAgent::flat_size() const {
  return config_.local.horizon *
         TrajectoryPlan::state_dim_for(config_.local.model);
}

Eigen::VectorXd OaAdmmAgent::broadcast(const Eigen::VectorXd& per_step) const {
  return broadcast_steps(per_step,
                         TrajectoryPlan::state_dim_for(config_.local.model));
}

void OaAdmmAgent::begin_step(const VehicleState& measured) {
  measured_ = measured;
  // Receding-horizon warm start: shift the input sequence by one step.
  if (inputs_.rows() > 1) {
    const Eigen::MatrixXd shifted = inputs_.bottomRows(inputs_.rows() - 1);
    inputs_.topRows(inputs_.rows() - 1) = shifted;
  }
  plan_ = rollout(measured_, inputs_, config_.local.dt, config_.local.bicycle);
  first_iteration_ = true;
  degraded_ = false;
}

void OaAdmmAgent::run_x_update() {
  const XUpdateResult result =
      x_update(config_.local, measured_, inputs_, self_, links_);
  degraded_ = result.degraded;
  last_pg_norm_ = result.projected_gradient_norm;
  if (!result.degraded) {
    inputs_ = result.inputs;
    plan_ = result.plan;
  }
}

PlanMessage OaAdmmAgent::plan_message() const {
  PlanMessage msg;
  msg.from = id_;
  msg.plan_flat = plan_.flatten();
  msg.headings = plan_.headings;
  msg.shape = config_.shape;
  msg.model = plan_.model;
  msg.dt = plan_.dt;
  return msg;
}

void OaAdmmAgent::receive_plan(const PlanMessage& message) {
  NeighborLink& link = link_ref(message.from);
  link.neighbor_plan = TrajectoryPlan::unflatten(
      message.model, message.dt, message.plan_flat, message.headings);
  link.neighbor_plan.headings = message.headings;
  link.neighbor_shape = message.shape;
}

void OaAdmmAgent::run_z_update() {
  ZUpdateOptions options;
  options.margin = config_.z_margin;
  options.slack_weight = 10.0 * config_.phi.phi_max;
  last_z_ = z_update(plan_, config_.shape, self_, links_, options);
  last_z_relaxed_ = last_z_.relaxed;
  self_.z = last_z_.z_self;
  for (size_t li = 0; li < links_.size(); ++li) {
    links_[li].z_local = last_z_.z_neighbors[li];
  }
}

void OaAdmmAgent::run_lambda_update() {
  const Eigen::VectorXd x_flat = plan_.flatten();
  // mu applies where a real-time step boundary was crossed; within one
  // control step later iterations use mu = 1.
  const bool use_mu = first_iteration_ && !config_.fixed_penalty;
  if (use_mu) {
    self_.mu = mu_filtered(self_.mu, self_.rho, config_.phi.weight, config_.mu);
    self_.lambda = (self_.mu.array() * self_.lambda.array()).matrix() +
                   (self_.rho.array() * (x_flat - self_.z).array()).matrix();
  } else {
    self_.lambda += (self_.rho.array() * (x_flat - self_.z).array()).matrix();
  }
  for (NeighborLink& link : links_) {
    const Eigen::VectorXd neighbor_flat = link.neighbor_plan.flatten();
    const Eigen::ArrayXd residual = neighbor_flat.array() - link.z_local.array();
    if (use_mu) {
      link.mu_local =
          mu_filtered(link.mu_local, link.rho_local, config_.phi.weight, config_.mu);
      link.lambda_local = (link.mu_local.array() * link.lambda_local.array() +
                           link.rho_local.array() * residual)
                              .matrix();
    } else {
      link.lambda_local += (link.rho_local.array() * residual).matrix();
    }
  }
}

void OaAdmmAgent::run_rho_update() {
  if (config_.fixed_penalty) {
    const int n = flat_size();
    self_.rho = Eigen::VectorXd::Constant(n, config_.phi.weight);
    for (NeighborLink& link : links_) {
      link.rho_local = Eigen::VectorXd::Constant(
          link.neighbor_plan.flatten().size(), config_.phi.weight);
    }
    return;
  }
  std::vector<Eigen::VectorXd> per_step_phis;
  per_step_phis.reserve(links_.size());
  for (NeighborLink& link : links_) {
    const Eigen::VectorXd phi = phi_pair(plan_, link.neighbor_plan,
                                         config_.shape, link.neighbor_shape,
                                         config_.phi);
    link.rho_local = broadcast(phi);
    per_step_phis.push_back(phi);
  }
  self_.rho =
      broadcast(phi_self(per_step_phis, config_.local.horizon, config_.phi));
}

LinkMessage OaAdmmAgent::link_message(int neighbor) const {
  for (const NeighborLink& link : links_) {
    if (link.neighbor_id == neighbor) {
      LinkMessage msg;
      msg.from = id_;
      msg.to = neighbor;
      msg.z = link.z_local;
      msg.lambda = link.lambda_local;
      msg.rho = link.rho_local;
      return msg;
    }
  }
  throw std::invalid_argument("link_message: no such neighbor");
}

void OaAdmmAgent::receive_link(const LinkMessage& message) {
  NeighborLink& link = link_ref(message.from);
  link.z_remote = message.z;
  link.lambda_remote = message.lambda;
  link.rho_remote = message.rho;
}

void OaAdmmAgent::end_iteration() { first_iteration_ = false; }

bool OaAdmmAgent::has_link(int neighbor) const {
  for (const NeighborLink& link : links_) {
    if (link.neighbor_id == neighbor) return true;
  }
  return false;
}

void OaAdmmAgent::ensure_link(const PlanMessage& hello) {
  if (has_link(hello.from)) return;
  NeighborLink link;
  link.neighbor_id = hello.from;
  link.neighbor_plan = TrajectoryPlan::unflatten(hello.model, hello.dt,
                                                 hello.plan_flat, hello.headings);
  link.neighbor_plan.headings = hello.headings;
  link.neighbor_shape = hello.shape;

  const int n = flat_size();
  const double rho0 = config_.phi.weight * config_.phi.phi_min;
  link.z_local = hello.plan_flat;
  link.lambda_local = Eigen::VectorXd::Zero(hello.plan_flat.size());
  link.rho_local = Eigen::VectorXd::Constant(hello.plan_flat.size(), rho0);
  link.mu_local = Eigen::VectorXd::Ones(hello.plan_flat.size());
  link.z_remote = plan_.flatten();
  link.lambda_remote = Eigen::VectorXd::Zero(n);
  link.rho_remote = Eigen::VectorXd::Constant(n, rho0);
  links_.push_back(std::move(link));
}

void OaAdmmAgent::remove_link(int neighbor) {
  links_.erase(std::remove_if(links_.begin(), links_.end(),
                              [neighbor](const NeighborLink& link) {
                                return link.neighbor_id == neighbor;
                              }),
               links_.end());
}

NeighborLink& OaAdmmAgent::link_ref(int neighbor) {
  for (NeighborLink& link : links_) {
    if (link.neighbor_id == neighbor) return link;
  }
  throw std::invalid_argument("no link to neighbor");
}

double OaAdmmAgent::self_residual() const {
  return (plan_.flatten() - self_.z).lpNorm<Eigen::Infinity>();
}

}  // namespace oadmm::agent
