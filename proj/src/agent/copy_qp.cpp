#include <cmath>
#include <limits>

#include "oadmm/agent/copy_qp.hpp"

namespace oadmm::agent {

namespace {

Eigen::VectorXd closed_form_target(const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& lambda,
                                   const Eigen::VectorXd& rho) {
  // Stationarity of lambda'(x - z) + sum rho_c (x_c - z_c)^2 in z.
  return x.array() + lambda.array() / (2.0 * rho.array());
}

struct HalfspaceRow {
  Eigen::Vector2d normal;
  double bound;  // constraint: normal . p >= bound
};

// min ||p - t||^2 s.t. n_j . p >= b_j for all rows; exact active-set
// enumeration over subsets of size <= 2. Returns false when infeasible.
bool project_lower_bounds(const Eigen::Vector2d& t,
                          const std::vector<HalfspaceRow>& rows,
                          Eigen::Vector2d& out) {
  constexpr double kTol = 1e-10;
  auto feasible = [&](const Eigen::Vector2d& p) {
    for (const HalfspaceRow& row : rows) {
      if (row.normal.dot(p) < row.bound - kTol) return false;
    }
    return true;
  };

  if (feasible(t)) {
    out = t;
    return true;
  }

  double best = std::numeric_limits<double>::infinity();
  bool found = false;

  for (size_t j = 0; j < rows.size(); ++j) {
    const double gap = rows[j].bound - rows[j].normal.dot(t);
    if (gap <= 0.0) continue;  // inactive as an equality candidate
    const Eigen::Vector2d p = t + gap * rows[j].normal;
    const double cost = (p - t).squaredNorm();
    if (feasible(p) && cost < best) {
      best = cost;
      out = p;
      found = true;
    }
  }

  for (size_t j = 0; j + 1 < rows.size(); ++j) {
    for (size_t l = j + 1; l < rows.size(); ++l) {
      Eigen::Matrix2d N;
      N.row(0) = rows[j].normal.transpose();
      N.row(1) = rows[l].normal.transpose();
      const double det = N.determinant();
      if (std::abs(det) < 1e-12) continue;
      const Eigen::Vector2d p =
          N.inverse() * Eigen::Vector2d(rows[j].bound, rows[l].bound);
      // dual signs: 2(p - t) = nu_j n_j + nu_l n_l, need nu >= 0
      const Eigen::Vector2d nu = 2.0 * N.transpose().inverse() * (p - t);
      if (nu[0] < -kTol || nu[1] < -kTol) continue;
      const double cost = (p - t).squaredNorm();
      if (feasible(p) && cost < best) {
        best = cost;
        out = p;
        found = true;
      }
    }
  }
  return found;
}

// Slack relaxation: min rho ||p - t||^2 + w_s sum max(0, b_j - n_j.p)^2,
// solved by semismooth Newton on the active set (2-D, converges in a few
// switches).
Eigen::Vector2d relax_lower_bounds(const Eigen::Vector2d& t,
                                   const std::vector<HalfspaceRow>& rows,
                                   double rho, double slack_weight) {
  Eigen::Vector2d p = t;
  for (int pass = 0; pass < 20; ++pass) {
    Eigen::Matrix2d H = 2.0 * rho * Eigen::Matrix2d::Identity();
    Eigen::Vector2d g = 2.0 * rho * (p - t);
    for (const HalfspaceRow& row : rows) {
      const double violation = row.bound - row.normal.dot(p);
      if (violation > 0.0) {
        g -= 2.0 * slack_weight * violation * row.normal;
        H += 2.0 * slack_weight * row.normal * row.normal.transpose();
      }
    }
    const Eigen::Vector2d step = H.ldlt().solve(g);
    p -= step;
    if (step.norm() < 1e-12) break;
  }
  return p;
}

}  // namespace

ZUpdateResult z_update(const TrajectoryPlan& own_plan,
                       const geom::CapsuleTemplate& own_shape,
                       const SelfLink& self_link,
                       const std::vector<NeighborLink>& links,
                       const ZUpdateOptions& options) {
  const int dim = own_plan.state_dim();
  const int horizon = own_plan.horizon();
  const Eigen::VectorXd own_flat = own_plan.flatten();

  ZUpdateResult result;
  result.z_self = closed_form_target(own_flat, self_link.lambda, self_link.rho);
  result.z_neighbors.reserve(links.size());
  for (const NeighborLink& link : links) {
    result.z_neighbors.push_back(closed_form_target(
        link.neighbor_plan.flatten(), link.lambda_local, link.rho_local));
  }
  if (links.empty()) return result;

  // Pose the unconstrained copies and keep them if already separated.
  auto copy_poses = [&](const Eigen::VectorXd& flat,
                        const TrajectoryPlan& like) {
    return TrajectoryPlan::unflatten(like.model, like.dt, flat, like.headings)
        .poses();
  };
  const std::vector<geom::Pose2> self_poses =
      copy_poses(result.z_self, own_plan);
  bool all_clear = true;
  for (size_t li = 0; li < links.size(); ++li) {
    const Eigen::VectorXd clearances = geom::clearance_along_poses(
        self_poses, copy_poses(result.z_neighbors[li], links[li].neighbor_plan),
        own_shape, links[li].neighbor_shape);
    if ((clearances.array() < 0.0).any()) {
      all_clear = false;
      break;
    }
  }
  if (all_clear) return result;
  result.constrained = true;

  // Linearize at the incoming plans, once per OA-ADMM iteration.
  const std::vector<geom::Pose2> plan_poses = own_plan.poses();
  std::vector<std::vector<HalfspaceRow>> own_rows(
      static_cast<size_t>(horizon));
  for (size_t li = 0; li < links.size(); ++li) {
    const NeighborLink& link = links[li];
    const std::vector<geom::Pose2> neighbor_poses = link.neighbor_plan.poses();
    const int ndim = link.neighbor_plan.state_dim();
    for (int k = 0; k < horizon; ++k) {
      const geom::Capsule own_capsule =
          geom::Capsule::posed(own_shape, plan_poses[static_cast<size_t>(k)]);
      const geom::Capsule neighbor_capsule = geom::Capsule::posed(
          link.neighbor_shape, neighbor_poses[static_cast<size_t>(k)]);
      const geom::Halfspace hs =
          geom::separating_halfspace(own_capsule, neighbor_capsule);

      const double own_extent =
          0.5 * own_shape.length *
          std::abs(hs.normal.dot(Eigen::Vector2d(
              std::cos(plan_poses[static_cast<size_t>(k)].heading),
              std::sin(plan_poses[static_cast<size_t>(k)].heading))));
      const double neighbor_extent =
          0.5 * link.neighbor_shape.length *
          std::abs(hs.normal.dot(Eigen::Vector2d(
              std::cos(neighbor_poses[static_cast<size_t>(k)].heading),
              std::sin(neighbor_poses[static_cast<size_t>(k)].heading))));

      own_rows[static_cast<size_t>(k)].push_back(HalfspaceRow{
          hs.normal,
          hs.offset + own_shape.radius + own_extent + options.margin});

      // Neighbor copy: normal . p <= offset - radius - extent - margin;
      // single constraint, projected in closed form if violated.
      const double upper = hs.offset - link.neighbor_shape.radius -
                           neighbor_extent - options.margin;
      Eigen::Vector2d p = result.z_neighbors[li].segment<2>(k * ndim);
      const double value = hs.normal.dot(p);
      if (value > upper) {
        p -= (value - upper) * hs.normal;
        result.z_neighbors[li].segment<2>(k * ndim) = p;
      }
    }
  }

  // Own copy: per-step projection onto the intersection of halfspaces.
  for (int k = 0; k < horizon; ++k) {
    const std::vector<HalfspaceRow>& rows = own_rows[static_cast<size_t>(k)];
    const Eigen::Vector2d target = result.z_self.segment<2>(k * dim);
    Eigen::Vector2d projected;
    if (project_lower_bounds(target, rows, projected)) {
      result.z_self.segment<2>(k * dim) = projected;
    } else {
      result.z_self.segment<2>(k * dim) = relax_lower_bounds(
          target, rows, self_link.rho[k * dim], options.slack_weight);
      result.relaxed = true;
    }
  }
  return result;
}

}  // namespace oadmm::agent
