#include <doctest.h>

#include <set>

#include "oadmm/sim/world.hpp"

using namespace oadmm;

namespace {

bool traces_identical(const sim::WorldTrace& a, const sim::WorldTrace& b) {
  if (a.states.size() != b.states.size()) return false;
  for (size_t t = 0; t < a.states.size(); ++t) {
    for (size_t v = 0; v < a.states[t].size(); ++v) {
      for (int c = 0; c < 3; ++c) {
        if (a.states[t][v][c] != b.states[t][v][c]) return false;
      }
    }
    if (a.clearances[t] != b.clearances[t]) return false;
  }
  return true;
}

sim::ScenarioSpec crossing_spec(sim::Protocol protocol, unsigned long seed) {
  const sim::ConflictCase crossing{sim::Maneuver::kForward,
                                   sim::RelativeArm::kLeft,
                                   sim::Maneuver::kForward};
  return sim::scenario_from_case(crossing, protocol, seed);
}

}  // namespace

TEST_CASE("conflict-case enumeration: 27 cases, no follower geometry") {
  const std::vector<sim::ConflictCase> cases = sim::enumerate_conflict_cases();
  CHECK(cases.size() == 27);

  bool found = false;
  for (const sim::ConflictCase& c : cases) {
    // the other vehicle never spawns on the ego's (south) arm
    CHECK(sim::absolute_arm(c.other_arm) != sim::Arm::kSouth);
    if (c.other_arm == sim::RelativeArm::kRight &&
        c.ego == sim::Maneuver::kLeft && c.other == sim::Maneuver::kRight) {
      found = true;
    }
  }
  CHECK(found);

  // all names unique
  std::set<std::string> names;
  for (const sim::ConflictCase& c : cases) names.insert(c.name());
  CHECK(names.size() == 27);
}

TEST_CASE("scenario text round trip") {
  sim::ScenarioSpec spec = crossing_spec(sim::Protocol::kPredictive, 77);
  spec.grid_fidelity = 4;
  spec.geometry.spawn_distance = 25.0;
  const sim::ScenarioSpec parsed =
      sim::parse_scenario_text(sim::scenario_to_text(spec));
  CHECK(parsed.protocol == spec.protocol);
  CHECK(parsed.seed == spec.seed);
  CHECK(parsed.grid_fidelity == 4);
  CHECK(parsed.geometry.spawn_distance == doctest::Approx(25.0));
  REQUIRE(parsed.vehicles.size() == 2);
  CHECK(parsed.vehicles[1].arm == sim::Arm::kWest);
  CHECK(parsed.vehicles[1].maneuver == sim::Maneuver::kForward);
}

TEST_CASE("reference speeds depend on the seed, not the protocol") {
  const sim::ScenarioSpec a = crossing_spec(sim::Protocol::kOaAdmm, 123);
  const sim::ScenarioSpec b = crossing_spec(sim::Protocol::kReactive, 123);
  const sim::ScenarioSpec c = crossing_spec(sim::Protocol::kOaAdmm, 124);
  CHECK(sim::draw_reference_speeds(a) == sim::draw_reference_speeds(b));
  CHECK(sim::draw_reference_speeds(a) != sim::draw_reference_speeds(c));
  for (double v : sim::draw_reference_speeds(a)) {
    CHECK(v >= 4.0 - 0.15);
    CHECK(v <= 4.0 + 0.15);
  }
}

TEST_CASE("intersection paths: projection and forward continuity") {
  const sim::IntersectionGeometry geometry;
  for (sim::Arm arm : {sim::Arm::kSouth, sim::Arm::kWest, sim::Arm::kNorth,
                       sim::Arm::kEast}) {
    for (sim::Maneuver maneuver :
         {sim::Maneuver::kLeft, sim::Maneuver::kForward, sim::Maneuver::kRight}) {
      const sim::ReferencePath path =
          sim::make_intersection_path(arm, maneuver, geometry);
      CHECK(path.finish_s < path.length());
      CHECK(path.finish_s > geometry.spawn_distance);

      Eigen::Vector2d previous = path.position(0.0);
      for (double s = 0.25; s <= path.length(); s += 0.25) {
        const Eigen::Vector2d p = path.position(s);
        CHECK((p - previous).norm() == doctest::Approx(0.25).epsilon(0.01));
        previous = p;

        const sim::ReferencePath::Projection proj = path.project(p);
        CHECK(proj.distance < 1e-9);
        CHECK(proj.s == doctest::Approx(s).epsilon(0.01));
      }

      // off-path distance and gradient
      const double s_mid = 0.5 * path.length();
      const Eigen::Vector2d on = path.position(s_mid);
      const double heading = path.heading(s_mid);
      const Eigen::Vector2d normal{-std::sin(heading), std::cos(heading)};
      const sim::ReferencePath::Projection proj = path.project(on + 1.3 * normal);
      CHECK(proj.distance == doctest::Approx(1.3).epsilon(1e-6));
      CHECK(proj.gradient.dot(normal) == doctest::Approx(1.0).epsilon(1e-6));
    }
  }
}

TEST_CASE("single OA-ADMM vehicle tracks the reference speed within 1%") {
  sim::ScenarioSpec spec = crossing_spec(sim::Protocol::kOaAdmm, 9);
  spec.speed_jitter = 0.0;
  sim::ClockConfig clock;
  clock.timeout_s = 6.0;
  sim::World world =
      sim::World::from_scenario(spec, clock, sim::AgentDefaults{}, 0);
  for (int tick = 0; tick < 120; ++tick) world.step();

  const sim::WorldTrace& trace = world.trace();
  for (size_t t = 20; t < trace.states.size(); ++t) {  // after transient
    CHECK(trace.states[t][0][2] == doctest::Approx(4.0).epsilon(0.01));
  }
}

TEST_CASE("far-apart vehicles behave exactly like solo runs") {
  sim::AgentDefaults defaults;
  sim::ClockConfig clock;
  clock.timeout_s = 4.0;

  auto line_setup = [](double y) {
    sim::VehicleSetup setup;
    setup.path = sim::make_line_path({0.0, y}, {1.0, 0.0}, 60.0, 45.0);
    setup.model = agent::DynamicsModel::kBicycle;
    setup.v_ref = 4.0;
    setup.shape = sim::default_shape(agent::DynamicsModel::kBicycle);
    return setup;
  };

  std::vector<sim::VehicleSetup> joint;
  joint.push_back(line_setup(0.0));
  joint.push_back(line_setup(200.0));  // outside the communication range
  sim::World joint_world(std::move(joint), sim::Protocol::kOaAdmm, clock,
                         defaults);
  const sim::WorldTrace joint_trace = joint_world.run();

  for (int v = 0; v < 2; ++v) {
    std::vector<sim::VehicleSetup> solo;
    solo.push_back(line_setup(v == 0 ? 0.0 : 200.0));
    sim::World solo_world(std::move(solo), sim::Protocol::kOaAdmm, clock,
                          defaults);
    const sim::WorldTrace solo_trace = solo_world.run();
    REQUIRE(solo_trace.states.size() == joint_trace.states.size());
    for (size_t t = 0; t < solo_trace.states.size(); ++t) {
      for (int c = 0; c < 3; ++c) {
        CHECK(std::abs(joint_trace.states[t][static_cast<size_t>(v)][c] -
                       solo_trace.states[t][0][c]) < 1e-6);
      }
    }
  }
}

TEST_CASE("plan and link exchange is bit-for-bit symmetric") {
  const sim::ScenarioSpec spec = crossing_spec(sim::Protocol::kOaAdmm, 42);
  sim::ClockConfig clock;
  sim::World world =
      sim::World::from_scenario(spec, clock, sim::AgentDefaults{});
  for (int tick = 0; tick < 5; ++tick) world.step();

  const agent::OaAdmmAgent& a0 = world.mpc_agent(0);
  const agent::OaAdmmAgent& a1 = world.mpc_agent(1);
  REQUIRE(a0.links().size() == 1);
  REQUIRE(a1.links().size() == 1);
  const agent::NeighborLink& link01 = a0.links()[0];
  const agent::NeighborLink& link10 = a1.links()[0];

  // what 0 stores as remote is exactly what 1 sent (z_10, lambda_10, rho_10)
  CHECK(link01.z_remote == link10.z_local);
  CHECK(link01.lambda_remote == link10.lambda_local);
  CHECK(link01.rho_remote == link10.rho_local);
  CHECK(link10.z_remote == link01.z_local);
  CHECK(link10.lambda_remote == link01.lambda_local);
  CHECK(link10.rho_remote == link01.rho_local);

  // exchanged plans match the sender's plan exactly
  CHECK(link01.neighbor_plan.flatten() == a1.plan().flatten());
  CHECK(link10.neighbor_plan.flatten() == a0.plan().flatten());
}

TEST_CASE("world runs are deterministic and thread-count independent") {
  const sim::ScenarioSpec spec = crossing_spec(sim::Protocol::kOaAdmm, 7);
  sim::ClockConfig clock;
  clock.timeout_s = 3.0;

  sim::World w1 = sim::World::from_scenario(spec, clock, sim::AgentDefaults{},
                                            -1, false);
  sim::World w2 = sim::World::from_scenario(spec, clock, sim::AgentDefaults{},
                                            -1, false);
  sim::World w3 = sim::World::from_scenario(spec, clock, sim::AgentDefaults{},
                                            -1, true);  // OpenMP fan-out
  const sim::WorldTrace t1 = w1.run();
  const sim::WorldTrace t2 = w2.run();
  const sim::WorldTrace t3 = w3.run();
  CHECK(traces_identical(t1, t2));
  CHECK(traces_identical(t1, t3));
}

TEST_CASE("protocol none: completion equals the no-conflict baseline") {
  sim::ScenarioSpec spec = crossing_spec(sim::Protocol::kNone, 3);
  spec.speed_jitter = 0.0;  // exact 4 m/s
  sim::ClockConfig clock;
  sim::World world =
      sim::World::from_scenario(spec, clock, sim::AgentDefaults{}, 0);
  const sim::WorldTrace trace = world.run();
  REQUIRE_FALSE(trace.timed_out);
  // straight-through finish line is 45 m of path at 4 m/s
  CHECK(trace.completion_times[0] == doctest::Approx(45.0 / 4.0).epsilon(0.01));
}

TEST_CASE("physics consistency: 160 vs 320 Hz substepping") {
  sim::ScenarioSpec spec = crossing_spec(sim::Protocol::kOaAdmm, 5);
  spec.speed_jitter = 0.0;

  sim::ClockConfig base;
  base.timeout_s = 20.0;
  sim::ClockConfig doubled = base;
  doubled.physics_hz = 320.0;

  sim::World w160 =
      sim::World::from_scenario(spec, base, sim::AgentDefaults{}, 0);
  sim::World w320 =
      sim::World::from_scenario(spec, doubled, sim::AgentDefaults{}, 0);
  const double t160 = w160.run().completion_times[0];
  const double t320 = w320.run().completion_times[0];
  REQUIRE_FALSE(std::isnan(t160));
  REQUIRE_FALSE(std::isnan(t320));
  CHECK(std::abs(t160 - t320) / t160 < 0.005);
}

TEST_CASE("clock config validation") {
  sim::ClockConfig clock;
  clock.physics_hz = 150.0;  // not a multiple of 20
  CHECK_THROWS_AS(clock.validate(), std::invalid_argument);
  clock.physics_hz = 160.0;
  CHECK_NOTHROW(clock.validate());
  CHECK(clock.substeps() == 8);
}

TEST_CASE("four-robot crossing: D = 0 runs and short timeouts flag") {
  sim::ClockConfig clock;
  clock.timeout_s = 1.0;  // deliberately too short to finish
  const sim::WorldTrace trace =
      sim::four_robot_crossing(0.0, 1.0, false, clock, sim::AgentDefaults{});
  CHECK(trace.vehicle_count == 4);
  CHECK(trace.timed_out);
  CHECK(trace.times.size() == 21);  // initial record + 20 ticks
}
