#include <cmath>

#include "oadmm/agent/dynamics.hpp"

namespace oadmm::agent {

VehicleState bicycle_step(const VehicleState& s, double accel, double steer,
                          double dt, const BicycleParams& params) {
  VehicleState out;
  out.model = DynamicsModel::kBicycle;
  const double psi = s.raw[2];
  const double v = s.raw[3];
  out.raw[0] = s.raw[0] + v * std::cos(psi) * dt;
  out.raw[1] = s.raw[1] + v * std::sin(psi) * dt;
  out.raw[2] = psi + v * std::tan(steer) / params.wheelbase * dt;
  out.raw[3] = v + accel * dt;
  return out;
}

VehicleState holonomic_step(const VehicleState& s, const Eigen::Vector2d& accel,
                            double dt) {
  VehicleState out;
  out.model = DynamicsModel::kHolonomic;
  out.raw[0] = s.raw[0] + s.raw[2] * dt;
  out.raw[1] = s.raw[1] + s.raw[3] * dt;
  out.raw[2] = s.raw[2] + accel.x() * dt;
  out.raw[3] = s.raw[3] + accel.y() * dt;
  return out;
}

VehicleState dynamics_step(const VehicleState& s, const Eigen::Vector2d& input,
                           double dt, const BicycleParams& params) {
  return s.model == DynamicsModel::kBicycle
             ? bicycle_step(s, input[0], input[1], dt, params)
             : holonomic_step(s, input, dt);
}

}  // namespace oadmm::agent
