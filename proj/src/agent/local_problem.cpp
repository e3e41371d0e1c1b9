#include <cmath>
#include <stdexcept>

#include "oadmm/agent/local_problem.hpp"

namespace oadmm::agent {

namespace {

double pull_value(const std::vector<ConsensusPull>& pulls,
                  const Eigen::VectorXd& flat) {
  double value = 0.0;
  for (const ConsensusPull& pull : pulls) {
    const Eigen::ArrayXd diff = flat.array() - pull.z->array();
    value += (pull.lambda->array() * diff).sum() +
             (pull.rho->array() * diff.square()).sum();
  }
  return value;
}

// d/dflat of the pull terms: lambda + 2 rho (flat - z).
Eigen::VectorXd pull_gradient(const std::vector<ConsensusPull>& pulls,
                              const Eigen::VectorXd& flat) {
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(flat.size());
  for (const ConsensusPull& pull : pulls) {
    grad.array() += pull.lambda->array() +
                    2.0 * pull.rho->array() * (flat.array() - pull.z->array());
  }
  return grad;
}

}  // namespace

XObjective x_objective(const LocalProblem& local, const VehicleState& start,
                       const Eigen::MatrixXd& inputs,
                       const std::vector<ConsensusPull>& pulls,
                       bool want_gradient) {
  const int horizon = static_cast<int>(inputs.rows());
  const TrajectoryPlan plan = rollout(start, inputs, local.dt, local.bicycle);
  const Eigen::VectorXd flat = plan.flatten();
  const int dim = plan.state_dim();

  XObjective out;
  out.value = pull_value(pulls, flat);

  // Tracking cost and, when requested, its direct derivatives per plan entry.
  Eigen::VectorXd flat_grad;
  if (want_gradient) flat_grad = pull_gradient(pulls, flat);

  Eigen::MatrixXd direct_input = Eigen::MatrixXd::Zero(horizon, 2);
  for (int k = 0; k < horizon; ++k) {
    const Eigen::Vector2d p = plan.position(k);
    Eigen::Vector2d lat_grad = Eigen::Vector2d::Zero();
    double lat = 0.0;
    if (local.lateral_distance) {
      lat = local.lateral_distance(p, want_gradient ? &lat_grad : nullptr);
    }
    out.value += local.q_lat * lat * lat;
    if (want_gradient) {
      flat_grad.segment(k * dim, 2) += 2.0 * local.q_lat * lat * lat_grad;
    }

    if (local.model == DynamicsModel::kBicycle) {
      const double v = plan.states(k, 2);
      const double a = inputs(k, 0);
      const double beta = inputs(k, 1);
      out.value += local.q_v * (v - local.v_ref) * (v - local.v_ref) +
                   local.r_a * a * a + local.r_beta * beta * beta;
      if (want_gradient) {
        flat_grad[k * dim + 2] += 2.0 * local.q_v * (v - local.v_ref);
        direct_input(k, 0) += 2.0 * local.r_a * a;
        direct_input(k, 1) += 2.0 * local.r_beta * beta;
      }
    } else {
      const Eigen::Vector2d vel = plan.states.row(k).tail<2>();
      const Eigen::Vector2d u = inputs.row(k);
      out.value += local.q_v * (vel - local.v_ref_vec).squaredNorm() +
                   local.r_a * u.squaredNorm();
      if (want_gradient) {
        flat_grad.segment(k * dim + 2, 2) +=
            2.0 * local.q_v * (vel - local.v_ref_vec);
        direct_input.row(k) += 2.0 * local.r_a * u.transpose();
      }
    }
  }
  if (!want_gradient) return out;

  // Adjoint sweep through the forward-Euler rollout. The plan rows for a
  // bicycle carry (x, y, v, a, beta); a and beta components of flat_grad
  // feed the input gradient directly.
  out.input_gradient = direct_input;
  if (local.model == DynamicsModel::kBicycle) {
    Eigen::Vector4d adjoint = Eigen::Vector4d::Zero();  // d/d(x,y,psi,v)
    for (int k = horizon - 1; k >= 0; --k) {
      adjoint[0] += flat_grad[k * dim + 0];
      adjoint[1] += flat_grad[k * dim + 1];
      adjoint[3] += flat_grad[k * dim + 2];
      out.input_gradient(k, 0) += flat_grad[k * dim + 3];
      out.input_gradient(k, 1) += flat_grad[k * dim + 4];

      const double psi_prev = k > 0 ? plan.headings[k - 1] : start.raw[2];
      const double v_prev = k > 0 ? plan.states(k - 1, 2) : start.raw[3];
      const double beta = inputs(k, 1);
      const double cos_b = std::cos(beta);

      out.input_gradient(k, 0) += adjoint[3] * local.dt;
      out.input_gradient(k, 1) +=
          adjoint[2] * v_prev * local.dt /
          (local.bicycle.wheelbase * cos_b * cos_b);

      // adjoint through s_k = F(s_{k-1}, u_k)
      Eigen::Vector4d prev;
      prev[0] = adjoint[0];
      prev[1] = adjoint[1];
      prev[2] = adjoint[2] - v_prev * std::sin(psi_prev) * local.dt * adjoint[0] +
                v_prev * std::cos(psi_prev) * local.dt * adjoint[1];
      prev[3] = adjoint[3] + std::cos(psi_prev) * local.dt * adjoint[0] +
                std::sin(psi_prev) * local.dt * adjoint[1] +
                std::tan(beta) / local.bicycle.wheelbase * local.dt * adjoint[2];
      adjoint = prev;
    }
  } else {
    Eigen::Vector4d adjoint = Eigen::Vector4d::Zero();  // d/d(x,y,vx,vy)
    for (int k = horizon - 1; k >= 0; --k) {
      adjoint += flat_grad.segment<4>(k * dim);
      out.input_gradient(k, 0) += adjoint[2] * local.dt;
      out.input_gradient(k, 1) += adjoint[3] * local.dt;
      Eigen::Vector4d prev;
      prev[0] = adjoint[0];
      prev[1] = adjoint[1];
      prev[2] = adjoint[2] + local.dt * adjoint[0];
      prev[3] = adjoint[3] + local.dt * adjoint[1];
      adjoint = prev;
    }
  }
  return out;
}

std::vector<ConsensusPull> collect_x_pulls(const SelfLink& self_link,
                                           const std::vector<NeighborLink>& links) {
  // Eq-9 structure: the x-update sees the self link plus the neighbors'
  // opinions about this agent (z_ji, lambda_ji, rho_ji).
  std::vector<ConsensusPull> pulls;
  pulls.reserve(1 + links.size());
  pulls.push_back(ConsensusPull{&self_link.lambda, &self_link.z, &self_link.rho});
  for (const NeighborLink& link : links) {
    pulls.push_back(
        ConsensusPull{&link.lambda_remote, &link.z_remote, &link.rho_remote});
  }
  return pulls;
}

namespace {

Eigen::MatrixXd clamp_inputs(const Eigen::MatrixXd& inputs,
                             const LocalProblem& local) {
  Eigen::MatrixXd out = inputs;
  for (int c = 0; c < 2; ++c) {
    out.col(c) = out.col(c)
                     .cwiseMax(local.input_lower[c])
                     .cwiseMin(local.input_upper[c]);
  }
  return out;
}

}  // namespace

XUpdateResult x_update(const LocalProblem& local, const VehicleState& start,
                       const Eigen::MatrixXd& warm_inputs,
                       const SelfLink& self_link,
                       const std::vector<NeighborLink>& links) {
  const std::vector<ConsensusPull> pulls = collect_x_pulls(self_link, links);

  XUpdateResult result;
  result.inputs = clamp_inputs(warm_inputs, local);

  Eigen::MatrixXd u = result.inputs;
  XObjective current = x_objective(local, start, u, pulls, true);
  double step = 1.0;
  constexpr double kArmijo = 1e-4;
  bool failed = false;

  for (int iter = 0; iter < local.max_iterations; ++iter) {
    if (!std::isfinite(current.value) || !current.input_gradient.allFinite()) {
      failed = true;
      break;
    }
    const Eigen::MatrixXd projected =
        clamp_inputs(u - current.input_gradient, local);
    result.projected_gradient_norm =
        (u - projected).lpNorm<Eigen::Infinity>();
    if (result.projected_gradient_norm <= local.tolerance) break;

    bool accepted = false;
    for (int bt = 0; bt < 40; ++bt) {
      const Eigen::MatrixXd trial =
          clamp_inputs(u - step * current.input_gradient, local);
      const XObjective trial_obj = x_objective(local, start, trial, pulls, false);
      const double decrease =
          (current.input_gradient.array() * (u - trial).array()).sum();
      if (std::isfinite(trial_obj.value) &&
          trial_obj.value <= current.value - kArmijo * decrease) {
        u = trial;
        current = x_objective(local, start, u, pulls, true);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // step is at numerical resolution; keep iterate
    step = std::min(step * 2.0, 1e4);
  }

  if (failed) {
    result.degraded = true;
    result.plan = rollout(start, result.inputs, local.dt, local.bicycle);
    return result;
  }
  result.inputs = u;
  result.plan = rollout(start, u, local.dt, local.bicycle);
  return result;
}

}  // namespace oadmm::agent
