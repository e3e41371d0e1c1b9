#include <cmath>
#include <stdexcept>

#include "oadmm/agent/adaptation.hpp"

namespace oadmm::agent {

void PhiConfig::validate() const {
  if (!(phi_min > 0.0) || !(phi_max > phi_min)) {
    throw std::invalid_argument("PhiConfig: need 0 < phi_min < phi_max");
  }
  if (!(weight > 0.0) || !(exponent > 0.0) || min_distance < 0.0) {
    throw std::invalid_argument("PhiConfig: need w > 0, a > 0, D >= 0");
  }
}

double phi_from_clearance(double clearance, const PhiConfig& cfg) {
  if (clearance <= 0.0) return cfg.weight * cfg.phi_max;
  const double ratio = std::pow(cfg.min_distance / clearance, cfg.exponent);
  if (ratio < cfg.phi_min) return cfg.weight * cfg.phi_min;
  if (ratio > cfg.phi_max) return cfg.weight * cfg.phi_max;
  return cfg.weight * ratio;
}

Eigen::VectorXd phi_pair_from_clearances(const Eigen::VectorXd& clearances,
                                         const PhiConfig& cfg) {
  cfg.validate();
  Eigen::VectorXd out(clearances.size());
  for (Eigen::Index k = 0; k < clearances.size(); ++k) {
    out[k] = phi_from_clearance(clearances[k], cfg);
  }
  return out;
}

Eigen::VectorXd phi_pair(const TrajectoryPlan& plan_i,
                         const TrajectoryPlan& plan_j,
                         const geom::CapsuleTemplate& shape_i,
                         const geom::CapsuleTemplate& shape_j,
                         const PhiConfig& cfg) {
  return phi_pair_from_clearances(
      clearance_along_plans(plan_i, plan_j, shape_i, shape_j), cfg);
}

Eigen::VectorXd phi_self(const std::vector<Eigen::VectorXd>& neighbor_phis,
                         Eigen::Index horizon, const PhiConfig& cfg) {
  cfg.validate();
  if (neighbor_phis.empty()) {
    return Eigen::VectorXd::Constant(horizon, cfg.weight * cfg.phi_min);
  }
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(horizon);
  for (const Eigen::VectorXd& phi : neighbor_phis) {
    if (phi.size() != horizon) {
      throw std::invalid_argument("phi_self: horizon mismatch");
    }
    acc += cfg.self_second_exponent
               ? phi.array().pow(cfg.exponent).matrix().eval()
               : phi;
  }
  acc *= cfg.weight / static_cast<double>(neighbor_phis.size());
  return acc.cwiseMax(cfg.weight * cfg.phi_min)
      .cwiseMin(cfg.weight * cfg.phi_max);
}

}  // namespace oadmm::agent
