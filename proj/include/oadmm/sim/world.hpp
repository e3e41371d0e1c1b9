#pragma once

#include <memory>

#include "oadmm/baselines/protocol.hpp"
#include "oadmm/sim/scenario.hpp"
#include "oadmm/sim/trace.hpp"

namespace oadmm::sim {

struct ClockConfig {
  double control_hz = 20.0;
  double physics_hz = 160.0;
  double timeout_s = 30.0;

  double control_dt() const { return 1.0 / control_hz; }
  int substeps() const;
  void validate() const;  // physics rate must be a multiple of control rate
};

/// Per-run solver and cost defaults applied to every agent.
struct AgentDefaults {
  agent::PhiConfig phi{/*min_distance=*/4.0, /*weight=*/1.0, /*exponent=*/2.0,
                       /*phi_min=*/0.05, /*phi_max=*/10.0,
                       /*self_second_exponent=*/true};
  agent::MuConfig mu;
  int iterations_per_step = 1;
  int horizon = 30;
  double comm_range = 80.0;
  double z_margin = 0.05;
  bool fixed_penalty = false;  // fixed-rho ADMM (sweep baseline mode)
  double pg_tolerance = 2e-3;
  int pg_max_iterations = 60;

  // bicycle tracking cost and input box
  double q_v = 1.0;
  double q_lat = 4.0;
  double r_a = 0.1;
  double r_beta = 0.5;
  double accel_bound = 3.0;
  double steer_bound = 0.6;

  // holonomic variants
  double holo_q_v = 1.0;
  double holo_q_lat = 0.5;
  double holo_r_a = 0.05;
  double holo_accel_bound = 2.0;
};

struct VehicleSetup {
  ReferencePath path;
  agent::DynamicsModel model = agent::DynamicsModel::kBicycle;
  double v_ref = 4.0;
  double weight_scale = 1.0;  // multiplies phi.weight for this vehicle
  geom::CapsuleTemplate shape{4.0, 1.0};
};

geom::CapsuleTemplate default_shape(agent::DynamicsModel model);

/// Synchronous time-stepped multi-agent world. One control tick runs the
/// protocol round (for OA-ADMM: x-update, plan exchange, z-update,
/// lambda-update, rho-update, link exchange, repeated per iteration), then
/// applies the first input and integrates physics substeps.
class World {
 public:
  World(std::vector<VehicleSetup> vehicles, Protocol protocol,
        const ClockConfig& clock, const AgentDefaults& defaults,
        int grid_fidelity = 8, bool parallel_agents = false);

  /// Builds the benchmark world for a scenario spec. `only_vehicle`
  /// restricts the world to a single vehicle (the no-conflict baseline run)
  /// while keeping the same reference-speed draws.
  static World from_scenario(const ScenarioSpec& spec, const ClockConfig& clock,
                             const AgentDefaults& defaults,
                             int only_vehicle = -1,
                             bool parallel_agents = false);

  void step();
  WorldTrace run();

  double time() const { return tick_ * clock_.control_dt(); }
  int vehicle_count() const { return static_cast<int>(vehicles_.size()); }
  bool all_finished() const;

  const agent::OaAdmmAgent& mpc_agent(int i) const;
  const agent::VehicleState& true_state(int i) const {
    return vehicles_[static_cast<size_t>(i)].state;
  }
  double progress(int i) const;
  const WorldTrace& trace() const { return trace_; }

 private:
  struct Vehicle {
    VehicleSetup setup;
    agent::VehicleState state;  // MPC-driven vehicles
    double path_s = 0.0;        // path-following vehicles
    double path_speed = 0.0;
    double last_progress = 0.0;
    bool finished = false;
    double applied_speed_cmd = 0.0;
    Eigen::Vector2d applied_input{0.0, 0.0};
    std::unique_ptr<agent::OaAdmmAgent> mpc;
    Eigen::VectorXd prev_final_plan;
    bool has_prev_final = false;
  };

  void oadmm_round();
  void baseline_round();
  void integrate_physics();
  void record_tick();
  geom::Capsule capsule_of(const Vehicle& vehicle) const;

  std::vector<Vehicle> vehicles_;
  Protocol protocol_;
  ClockConfig clock_;
  AgentDefaults defaults_;
  bool parallel_;
  std::unique_ptr<baselines::GridProtocol> grid_protocol_;
  WorldTrace trace_;
  long tick_ = 0;
};

/// Four holonomic robots crossing at the origin, two per axis; robots on
/// the horizontal lane run with doubled importance weight to break the
/// symmetric deadlock. Returns the full trace (classification happens in
/// the benchmark layer).
WorldTrace four_robot_crossing(double min_distance, double weight,
                               bool fixed_penalty, const ClockConfig& clock,
                               const AgentDefaults& base,
                               bool parallel_agents = false);

}  // namespace oadmm::sim
