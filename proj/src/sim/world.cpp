#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "oadmm/sim/world.hpp"

namespace oadmm::sim {

int ClockConfig::substeps() const {
  return static_cast<int>(std::lround(physics_hz / control_hz));
}

void ClockConfig::validate() const {
  if (control_hz <= 0.0 || physics_hz <= 0.0 || timeout_s <= 0.0) {
    throw std::invalid_argument("ClockConfig: rates must be positive");
  }
  const double ratio = physics_hz / control_hz;
  if (std::abs(ratio - std::lround(ratio)) > 1e-9) {
    throw std::invalid_argument(
        "ClockConfig: physics rate must be an integer multiple of the control rate");
  }
}

geom::CapsuleTemplate default_shape(agent::DynamicsModel model) {
  return model == agent::DynamicsModel::kBicycle
             ? geom::CapsuleTemplate{4.0, 1.0}
             : geom::CapsuleTemplate{0.0, 0.5};
}

namespace {

agent::VehicleState spawn_state(const VehicleSetup& setup) {
  agent::VehicleState state;
  state.model = setup.model;
  const Eigen::Vector2d pos = setup.path.position(0.0);
  const double heading = setup.path.heading(0.0);
  if (setup.model == agent::DynamicsModel::kBicycle) {
    state.raw << pos.x(), pos.y(), heading, setup.v_ref;
  } else {
    state.raw << pos.x(), pos.y(), setup.v_ref * std::cos(heading),
        setup.v_ref * std::sin(heading);
  }
  return state;
}

agent::AgentConfig agent_config_for(const VehicleSetup& setup,
                                    const ClockConfig& clock,
                                    const AgentDefaults& defaults) {
  agent::AgentConfig config;
  config.shape = setup.shape;
  config.phi = defaults.phi;
  config.phi.weight = defaults.phi.weight * setup.weight_scale;
  config.mu = defaults.mu;
  config.iterations_per_step = defaults.iterations_per_step;
  config.z_margin = defaults.z_margin;
  config.fixed_penalty = defaults.fixed_penalty;

  agent::LocalProblem& local = config.local;
  local.model = setup.model;
  local.horizon = defaults.horizon;
  local.dt = clock.control_dt();
  local.tolerance = defaults.pg_tolerance;
  local.max_iterations = defaults.pg_max_iterations;
  local.v_ref = setup.v_ref;

  const ReferencePath path = setup.path;  // captured by value below
  local.lateral_distance = [path](const Eigen::Vector2d& p,
                                  Eigen::Vector2d* grad) {
    const ReferencePath::Projection projection = path.project(p);
    if (grad != nullptr) *grad = projection.gradient;
    return projection.distance;
  };

  if (setup.model == agent::DynamicsModel::kBicycle) {
    local.q_v = defaults.q_v;
    local.q_lat = defaults.q_lat;
    local.r_a = defaults.r_a;
    local.r_beta = defaults.r_beta;
    local.input_lower = {-defaults.accel_bound, -defaults.steer_bound};
    local.input_upper = {defaults.accel_bound, defaults.steer_bound};
  } else {
    local.q_v = defaults.holo_q_v;
    local.q_lat = defaults.holo_q_lat;
    local.r_a = defaults.holo_r_a;
    local.r_beta = 0.0;
    local.input_lower = {-defaults.holo_accel_bound, -defaults.holo_accel_bound};
    local.input_upper = {defaults.holo_accel_bound, defaults.holo_accel_bound};
    const double heading = setup.path.heading(0.0);
    local.v_ref_vec = setup.v_ref *
                      Eigen::Vector2d(std::cos(heading), std::sin(heading));
  }
  return config;
}

}  // namespace

World::World(std::vector<VehicleSetup> vehicles, Protocol protocol,
             const ClockConfig& clock, const AgentDefaults& defaults,
             int grid_fidelity, bool parallel_agents)
    : protocol_(protocol),
      clock_(clock),
      defaults_(defaults),
      parallel_(parallel_agents) {
  clock_.validate();
  if (vehicles.empty()) {
    throw std::invalid_argument("World: no vehicles");
  }

  vehicles_.reserve(vehicles.size());
  for (VehicleSetup& setup : vehicles) {
    Vehicle vehicle;
    vehicle.setup = std::move(setup);
    vehicle.state = spawn_state(vehicle.setup);
    vehicle.path_speed = vehicle.setup.v_ref;
    vehicles_.push_back(std::move(vehicle));
  }

  if (protocol_ == Protocol::kOaAdmm) {
    for (size_t i = 0; i < vehicles_.size(); ++i) {
      vehicles_[i].mpc = std::make_unique<agent::OaAdmmAgent>(
          static_cast<int>(i),
          agent_config_for(vehicles_[i].setup, clock_, defaults_),
          vehicles_[i].state);
    }
  } else if (protocol_ == Protocol::kReactive ||
             protocol_ == Protocol::kPredictive) {
    std::vector<baselines::BaselineVehicle> infos;
    infos.reserve(vehicles_.size());
    for (const Vehicle& vehicle : vehicles_) {
      infos.push_back(baselines::BaselineVehicle{
          vehicle.setup.path, vehicle.setup.v_ref, vehicle.setup.shape.radius,
          0.5 * vehicle.setup.shape.length + vehicle.setup.shape.radius});
    }
    baselines::GridConfig grid_config;
    grid_config.fidelity = grid_fidelity;
    grid_protocol_ = protocol_ == Protocol::kReactive
                         ? baselines::make_reactive_protocol(grid_config,
                                                             std::move(infos))
                         : baselines::make_predictive_protocol(grid_config,
                                                               std::move(infos));
  }

  trace_.control_dt = clock_.control_dt();
  trace_.vehicle_count = vehicle_count();
  trace_.completion_times.assign(vehicles_.size(),
                                 std::numeric_limits<double>::quiet_NaN());
}

World World::from_scenario(const ScenarioSpec& spec, const ClockConfig& clock,
                           const AgentDefaults& defaults, int only_vehicle,
                           bool parallel_agents) {
  const std::vector<double> speeds = draw_reference_speeds(spec);
  std::vector<VehicleSetup> setups;
  for (size_t i = 0; i < spec.vehicles.size(); ++i) {
    if (only_vehicle >= 0 && static_cast<size_t>(only_vehicle) != i) continue;
    const VehicleSpec& vs = spec.vehicles[i];
    VehicleSetup setup;
    setup.path = make_intersection_path(vs.arm, vs.maneuver, spec.geometry);
    setup.model = vs.model;
    setup.v_ref = speeds[i];
    setup.shape = default_shape(vs.model);
    setups.push_back(std::move(setup));
  }
  return World(std::move(setups), spec.protocol, clock, defaults,
               spec.grid_fidelity, parallel_agents);
}

const agent::OaAdmmAgent& World::mpc_agent(int i) const {
  if (vehicles_[static_cast<size_t>(i)].mpc == nullptr) {
    throw std::logic_error("mpc_agent: vehicle has no OA-ADMM agent");
  }
  return *vehicles_[static_cast<size_t>(i)].mpc;
}

double World::progress(int i) const {
  const Vehicle& vehicle = vehicles_[static_cast<size_t>(i)];
  if (protocol_ == Protocol::kOaAdmm) {
    return vehicle.setup.path.project(vehicle.state.position()).s;
  }
  return vehicle.path_s;
}

bool World::all_finished() const {
  for (const Vehicle& vehicle : vehicles_) {
    if (!vehicle.finished) return false;
  }
  return true;
}

geom::Capsule World::capsule_of(const Vehicle& vehicle) const {
  geom::Pose2 pose;
  if (protocol_ == Protocol::kOaAdmm) {
    pose.position = vehicle.state.position();
    pose.heading = vehicle.state.heading();
  } else {
    pose.position = vehicle.setup.path.position(vehicle.path_s);
    pose.heading = vehicle.setup.path.heading(vehicle.path_s);
  }
  return geom::Capsule::posed(vehicle.setup.shape, pose);
}

void World::oadmm_round() {
  const int n = vehicle_count();

  // Link management by true positions, symmetric by construction.
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double distance =
          (vehicles_[i].state.position() - vehicles_[j].state.position())
              .norm();
      const bool linked = vehicles_[i].mpc->has_link(j);
      if (distance <= defaults_.comm_range && !linked) {
        vehicles_[i].mpc->ensure_link(vehicles_[j].mpc->plan_message());
        vehicles_[j].mpc->ensure_link(vehicles_[i].mpc->plan_message());
      } else if (distance > defaults_.comm_range && linked) {
        vehicles_[i].mpc->remove_link(j);
        vehicles_[j].mpc->remove_link(i);
      }
    }
  }

  for (Vehicle& vehicle : vehicles_) {
    vehicle.mpc->begin_step(vehicle.state);
  }
  std::vector<Eigen::VectorXd> begin_plans(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    begin_plans[static_cast<size_t>(i)] = vehicles_[i].mpc->plan().flatten();
  }

  for (int iteration = 0; iteration < defaults_.iterations_per_step;
       ++iteration) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel_)
#endif
    for (int i = 0; i < n; ++i) {
      vehicles_[i].mpc->run_x_update();
    }

    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (!vehicles_[i].mpc->has_link(j)) continue;
        vehicles_[i].mpc->receive_plan(vehicles_[j].mpc->plan_message());
        vehicles_[j].mpc->receive_plan(vehicles_[i].mpc->plan_message());
      }
    }

#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel_)
#endif
    for (int i = 0; i < n; ++i) {
      vehicles_[i].mpc->run_z_update();
      vehicles_[i].mpc->run_lambda_update();
      vehicles_[i].mpc->run_rho_update();
    }

    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (!vehicles_[i].mpc->has_link(j)) continue;
        vehicles_[i].mpc->receive_link(vehicles_[j].mpc->link_message(i));
        vehicles_[j].mpc->receive_link(vehicles_[i].mpc->link_message(j));
      }
    }

    for (int i = 0; i < n; ++i) {
      vehicles_[i].mpc->end_iteration();
    }
  }

  bool degraded = false;
  bool relaxed = false;
  for (int i = 0; i < n; ++i) {
    Vehicle& vehicle = vehicles_[static_cast<size_t>(i)];
    vehicle.applied_input = vehicle.mpc->first_input();
    degraded = degraded || vehicle.mpc->degraded_step();
    relaxed = relaxed || vehicle.mpc->relaxed_z();

    const Eigen::VectorXd final_plan = vehicle.mpc->plan().flatten();
    if (vehicle.has_prev_final) {
      const double contraction =
          (begin_plans[static_cast<size_t>(i)] - final_plan).norm();
      const double drift = (final_plan - vehicle.prev_final_plan).norm();
      trace_.dominance_checked += 1;
      trace_.dominance_holds += contraction > drift ? 1 : 0;
    }
    vehicle.prev_final_plan = final_plan;
    vehicle.has_prev_final = true;
  }
  trace_.degraded_ticks += degraded ? 1 : 0;
  trace_.relaxed_ticks += relaxed ? 1 : 0;
}

void World::baseline_round() {
  const int n = vehicle_count();
  if (grid_protocol_ != nullptr) {
    std::vector<double> s(static_cast<size_t>(n));
    std::vector<double> speed(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      s[static_cast<size_t>(i)] = vehicles_[i].path_s;
      speed[static_cast<size_t>(i)] = vehicles_[i].path_speed;
    }
    grid_protocol_->begin_tick(time(), s, speed);
    for (int i = 0; i < n; ++i) {
      vehicles_[i].applied_speed_cmd = grid_protocol_->speed_command(i, time());
    }
  } else {
    for (Vehicle& vehicle : vehicles_) {
      vehicle.applied_speed_cmd = vehicle.setup.v_ref;
    }
  }
}

void World::integrate_physics() {
  const int substeps = clock_.substeps();
  const double dt = clock_.control_dt() / substeps;
  for (Vehicle& vehicle : vehicles_) {
    if (protocol_ == Protocol::kOaAdmm) {
      for (int step = 0; step < substeps; ++step) {
        vehicle.state = agent::dynamics_step(
            vehicle.state, vehicle.applied_input, dt,
            agent::BicycleParams{});
      }
    } else {
      const double accel = std::clamp(
          (vehicle.applied_speed_cmd - vehicle.path_speed) /
              clock_.control_dt(),
          -defaults_.accel_bound, defaults_.accel_bound);
      for (int step = 0; step < substeps; ++step) {
        vehicle.path_speed = std::max(0.0, vehicle.path_speed + accel * dt);
        vehicle.path_s += vehicle.path_speed * dt;
      }
    }
  }
}

void World::record_tick() {
  const int n = vehicle_count();
  trace_.times.push_back(time());
  std::vector<std::array<double, 3>> row(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const Vehicle& vehicle = vehicles_[static_cast<size_t>(i)];
    if (protocol_ == Protocol::kOaAdmm) {
      row[static_cast<size_t>(i)] = {vehicle.state.raw[0],
                                     vehicle.state.raw[1],
                                     vehicle.state.speed()};
    } else {
      const Eigen::Vector2d pos = vehicle.setup.path.position(vehicle.path_s);
      row[static_cast<size_t>(i)] = {pos.x(), pos.y(), vehicle.path_speed};
    }
  }
  trace_.states.push_back(std::move(row));

  std::vector<double> clearances(static_cast<size_t>(trace_.pair_count()));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double clearance = geom::capsule_clearance(
          capsule_of(vehicles_[static_cast<size_t>(i)]),
          capsule_of(vehicles_[static_cast<size_t>(j)]));
      clearances[static_cast<size_t>(WorldTrace::pair_index(i, j, n))] =
          clearance;
      trace_.min_clearance = std::min(trace_.min_clearance, clearance);
    }
  }
  trace_.clearances.push_back(std::move(clearances));
}

void World::step() {
  if (protocol_ == Protocol::kOaAdmm) {
    oadmm_round();
  } else {
    baseline_round();
  }
  integrate_physics();
  ++tick_;

  for (size_t i = 0; i < vehicles_.size(); ++i) {
    Vehicle& vehicle = vehicles_[i];
    const double now_progress = progress(static_cast<int>(i));
    if (!vehicle.finished &&
        now_progress >= vehicle.setup.path.finish_s &&
        now_progress > vehicle.last_progress) {
      const double span = now_progress - vehicle.last_progress;
      double frac =
          (vehicle.setup.path.finish_s - vehicle.last_progress) / span;
      frac = std::clamp(frac, 0.0, 1.0);
      vehicle.finished = true;
      trace_.completion_times[i] =
          (tick_ - 1) * clock_.control_dt() + frac * clock_.control_dt();
    }
    vehicle.last_progress = now_progress;
  }
  record_tick();
}

WorldTrace World::run() {
  for (size_t i = 0; i < vehicles_.size(); ++i) {
    vehicles_[i].last_progress = progress(static_cast<int>(i));
  }
  record_tick();
  const long max_ticks =
      static_cast<long>(std::lround(clock_.timeout_s * clock_.control_hz));
  while (!all_finished() && tick_ < max_ticks) {
    step();
  }
  trace_.timed_out = !all_finished();
  trace_.duration = time();
  return trace_;
}

WorldTrace four_robot_crossing(double min_distance, double weight,
                               bool fixed_penalty, const ClockConfig& clock,
                               const AgentDefaults& base,
                               bool parallel_agents) {
  AgentDefaults defaults = base;
  defaults.phi.min_distance = min_distance;
  defaults.phi.weight = weight;
  defaults.fixed_penalty = fixed_penalty;

  const double spawn = 12.0;
  const double v_ref = 3.0;
  const double finish = 2.0 * spawn;
  const double length = finish + 16.0;

  std::vector<VehicleSetup> robots;
  auto add = [&](const Eigen::Vector2d& start, const Eigen::Vector2d& dir,
                 double scale) {
    VehicleSetup setup;
    setup.path = make_line_path(start, dir, length, finish);
    setup.model = agent::DynamicsModel::kHolonomic;
    setup.v_ref = v_ref;
    setup.weight_scale = scale;
    setup.shape = default_shape(agent::DynamicsModel::kHolonomic);
    robots.push_back(std::move(setup));
  };
  // two robots per axis; horizontal-lane robots carry doubled weight
  add({-spawn, 0.0}, {1.0, 0.0}, 2.0);
  add({spawn, 0.0}, {-1.0, 0.0}, 2.0);
  add({0.0, -spawn}, {0.0, 1.0}, 1.0);
  add({0.0, spawn}, {0.0, -1.0}, 1.0);

  World world(std::move(robots), Protocol::kOaAdmm, clock, defaults,
              /*grid_fidelity=*/8, parallel_agents);
  return world.run();
}

}  // namespace oadmm::sim
