#include <cmath>
#include <stdexcept>

#include "oadmm/agent/trajectory.hpp"

#include "oadmm/agent/links.hpp"

namespace oadmm::agent {

Eigen::VectorXd TrajectoryPlan::flatten() const {
  Eigen::VectorXd flat(states.size());
  for (int k = 0; k < horizon(); ++k) {
    flat.segment(k * state_dim(), state_dim()) = states.row(k);
  }
  return flat;
}

TrajectoryPlan TrajectoryPlan::unflatten(DynamicsModel model, double dt,
                                         const Eigen::VectorXd& flat,
                                         const Eigen::VectorXd& fallback_headings) {
  const int dim = state_dim_for(model);
  if (flat.size() % dim != 0) {
    throw std::invalid_argument("TrajectoryPlan::unflatten: size mismatch");
  }
  TrajectoryPlan plan;
  plan.model = model;
  plan.dt = dt;
  const int horizon = static_cast<int>(flat.size()) / dim;
  plan.states.resize(horizon, dim);
  for (int k = 0; k < horizon; ++k) {
    plan.states.row(k) = flat.segment(k * dim, dim);
  }
  plan.headings =
      derive_headings(plan.states.leftCols<2>(), fallback_headings);
  return plan;
}

std::vector<geom::Pose2> TrajectoryPlan::poses() const {
  std::vector<geom::Pose2> out(static_cast<size_t>(horizon()));
  for (int k = 0; k < horizon(); ++k) {
    out[static_cast<size_t>(k)] = geom::Pose2{position(k), headings[k]};
  }
  return out;
}

Eigen::VectorXd derive_headings(const Eigen::MatrixXd& positions,
                                const Eigen::VectorXd& fallback) {
  const int n = static_cast<int>(positions.rows());
  Eigen::VectorXd headings(n);
  double last = fallback.size() > 0 ? fallback[0] : 0.0;
  for (int k = 0; k < n; ++k) {
    Eigen::Vector2d diff;
    if (k + 1 < n) {
      diff = positions.row(k + 1) - positions.row(k);
    } else if (n >= 2) {
      diff = positions.row(k) - positions.row(k - 1);
    } else {
      diff.setZero();
    }
    if (diff.norm() > 1e-9) {
      last = std::atan2(diff.y(), diff.x());
    } else if (fallback.size() > k) {
      last = fallback[k];
    }
    headings[k] = last;
  }
  return headings;
}

TrajectoryPlan rollout(const VehicleState& start, const Eigen::MatrixXd& inputs,
                       double dt, const BicycleParams& params) {
  const int horizon = static_cast<int>(inputs.rows());
  TrajectoryPlan plan;
  plan.model = start.model;
  plan.dt = dt;
  plan.states.resize(horizon, TrajectoryPlan::state_dim_for(start.model));
  plan.headings.resize(horizon);

  VehicleState s = start;
  for (int k = 0; k < horizon; ++k) {
    s = dynamics_step(s, inputs.row(k), dt, params);
    if (start.model == DynamicsModel::kBicycle) {
      plan.states(k, 0) = s.raw[0];
      plan.states(k, 1) = s.raw[1];
      plan.states(k, 2) = s.raw[3];
      plan.states(k, 3) = inputs(k, 0);
      plan.states(k, 4) = inputs(k, 1);
      plan.headings[k] = s.raw[2];
    } else {
      plan.states.row(k) = s.raw;
      const Eigen::Vector2d v = s.raw.tail<2>();
      plan.headings[k] =
          v.norm() > 1e-9
              ? std::atan2(v.y(), v.x())
              : (k > 0 ? plan.headings[k - 1] : start.heading());
    }
  }
  return plan;
}

Eigen::VectorXd broadcast_steps(const Eigen::VectorXd& per_step,
                                int state_dim) {
  Eigen::VectorXd out(per_step.size() * state_dim);
  for (Eigen::Index k = 0; k < per_step.size(); ++k) {
    out.segment(k * state_dim, state_dim).setConstant(per_step[k]);
  }
  return out;
}

Eigen::VectorXd clearance_along_plans(const TrajectoryPlan& plan_i,
                                      const TrajectoryPlan& plan_j,
                                      const geom::CapsuleTemplate& shape_i,
                                      const geom::CapsuleTemplate& shape_j) {
  if (plan_i.horizon() != plan_j.horizon()) {
    throw std::invalid_argument("clearance_along_plans: horizon mismatch");
  }
  return geom::clearance_along_poses(plan_i.poses(), plan_j.poses(), shape_i,
                                     shape_j);
}

}  // namespace oadmm::agent
