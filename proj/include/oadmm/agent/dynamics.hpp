#pragma once

#include <Eigen/Dense>

namespace oadmm::agent {

enum class DynamicsModel { kBicycle, kHolonomic };

/// Unified current-state record.
/// bicycle:   raw = [x, y, psi, v]
/// holonomic: raw = [x, y, vx, vy]
struct VehicleState {
  DynamicsModel model = DynamicsModel::kBicycle;
  Eigen::Vector4d raw = Eigen::Vector4d::Zero();

  Eigen::Vector2d position() const { return raw.head<2>(); }
  double speed() const {
    return model == DynamicsModel::kBicycle ? raw[3] : raw.tail<2>().norm();
  }
  double heading() const {
    if (model == DynamicsModel::kBicycle) return raw[2];
    const Eigen::Vector2d v = raw.tail<2>();
    return v.norm() > 1e-9 ? std::atan2(v.y(), v.x()) : 0.0;
  }
};

struct BicycleParams {
  double wheelbase = 2.5;  // m
};

/// Forward-Euler kinematic bicycle step with inputs (a, beta).
VehicleState bicycle_step(const VehicleState& s, double accel, double steer,
                          double dt, const BicycleParams& params);

/// Forward-Euler double integrator step with inputs (ax, ay).
VehicleState holonomic_step(const VehicleState& s, const Eigen::Vector2d& accel,
                            double dt);

VehicleState dynamics_step(const VehicleState& s, const Eigen::Vector2d& input,
                           double dt, const BicycleParams& params);

}  // namespace oadmm::agent
