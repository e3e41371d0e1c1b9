#pragma once

#include <string>
#include <vector>

#include "oadmm/agent/oadmm_agent.hpp"
#include "oadmm/sim/path.hpp"

namespace oadmm::sim {

enum class Protocol { kNone, kOaAdmm, kReactive, kPredictive };

enum class RelativeArm { kLeft, kFront, kRight };

struct VehicleSpec {
  Arm arm = Arm::kSouth;
  Maneuver maneuver = Maneuver::kForward;
  agent::DynamicsModel model = agent::DynamicsModel::kBicycle;
};

/// A two-or-more-vehicle intersection conflict case.
struct ScenarioSpec {
  IntersectionGeometry geometry;
  std::vector<VehicleSpec> vehicles;
  double reference_speed = 4.0;
  double speed_jitter = 0.15;  // uniform perturbation bound (m/s)
  unsigned long seed = 1;
  Protocol protocol = Protocol::kOaAdmm;
  int grid_fidelity = 8;  // reservation-grid fidelity for baseline protocols
};

/// Reference-speed draws for all vehicles of a spec. Depends only on the
/// seed and vehicle count, never on the protocol, so identical seeds
/// reproduce identical perturbations across protocol tags.
std::vector<double> draw_reference_speeds(const ScenarioSpec& spec);

/// One benchmark conflict case: ego maneuver, the other vehicle's arm
/// relative to the ego, and the other vehicle's maneuver.
struct ConflictCase {
  Maneuver ego = Maneuver::kForward;
  RelativeArm other_arm = RelativeArm::kLeft;
  Maneuver other = Maneuver::kForward;

  std::string name() const;
};

/// All 27 (ego maneuver x other arm x other maneuver) combinations; the
/// same-arm follower geometry is not part of the enumeration.
std::vector<ConflictCase> enumerate_conflict_cases();

/// Ego enters from the south arm; the other vehicle's absolute arm follows
/// from the relative direction.
Arm absolute_arm(RelativeArm relative);

ScenarioSpec scenario_from_case(const ConflictCase& conflict_case,
                                Protocol protocol, unsigned long seed,
                                int grid_fidelity = 8);

const char* to_string(Protocol protocol);
const char* to_string(Maneuver maneuver);
const char* to_string(Arm arm);
const char* to_string(RelativeArm arm);

/// Scenario text format: key/value lines in [scenario] and repeated
/// [vehicle] sections.
ScenarioSpec parse_scenario_text(const std::string& text);
ScenarioSpec load_scenario_file(const std::string& path);
std::string scenario_to_text(const ScenarioSpec& spec);

}  // namespace oadmm::sim
