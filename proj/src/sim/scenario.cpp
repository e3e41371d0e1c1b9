#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "oadmm/sim/scenario.hpp"

namespace oadmm::sim {

std::vector<double> draw_reference_speeds(const ScenarioSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> jitter(-spec.speed_jitter,
                                                spec.speed_jitter);
  std::vector<double> speeds(spec.vehicles.size());
  for (double& v : speeds) v = spec.reference_speed + jitter(rng);
  return speeds;
}

namespace {

char maneuver_letter(Maneuver m) {
  switch (m) {
    case Maneuver::kLeft: return 'L';
    case Maneuver::kForward: return 'F';
    case Maneuver::kRight: return 'R';
  }
  return '?';
}

char arm_letter(RelativeArm a) {
  switch (a) {
    case RelativeArm::kLeft: return 'L';
    case RelativeArm::kFront: return 'F';
    case RelativeArm::kRight: return 'R';
  }
  return '?';
}

}  // namespace

std::string ConflictCase::name() const {
  std::string s = "ego-";
  s += maneuver_letter(ego);
  s += "_arm-";
  s += arm_letter(other_arm);
  s += "_other-";
  s += maneuver_letter(other);
  return s;
}

std::vector<ConflictCase> enumerate_conflict_cases() {
  std::vector<ConflictCase> cases;
  cases.reserve(27);
  for (Maneuver ego : {Maneuver::kLeft, Maneuver::kForward, Maneuver::kRight}) {
    for (RelativeArm arm :
         {RelativeArm::kLeft, RelativeArm::kFront, RelativeArm::kRight}) {
      for (Maneuver other :
           {Maneuver::kLeft, Maneuver::kForward, Maneuver::kRight}) {
        cases.push_back(ConflictCase{ego, arm, other});
      }
    }
  }
  return cases;
}

Arm absolute_arm(RelativeArm relative) {
  // Ego enters from the south traveling north.
  switch (relative) {
    case RelativeArm::kLeft: return Arm::kWest;
    case RelativeArm::kFront: return Arm::kNorth;
    case RelativeArm::kRight: return Arm::kEast;
  }
  return Arm::kWest;
}

ScenarioSpec scenario_from_case(const ConflictCase& conflict_case,
                                Protocol protocol, unsigned long seed,
                                int grid_fidelity) {
  ScenarioSpec spec;
  spec.protocol = protocol;
  spec.seed = seed;
  spec.grid_fidelity = grid_fidelity;
  spec.vehicles.push_back(
      VehicleSpec{Arm::kSouth, conflict_case.ego, agent::DynamicsModel::kBicycle});
  spec.vehicles.push_back(VehicleSpec{absolute_arm(conflict_case.other_arm),
                                      conflict_case.other,
                                      agent::DynamicsModel::kBicycle});
  return spec;
}

const char* to_string(Protocol protocol) {
  switch (protocol) {
    case Protocol::kNone: return "none";
    case Protocol::kOaAdmm: return "oadmm";
    case Protocol::kReactive: return "reactive";
    case Protocol::kPredictive: return "predictive";
  }
  return "?";
}

const char* to_string(Maneuver maneuver) {
  switch (maneuver) {
    case Maneuver::kLeft: return "left";
    case Maneuver::kForward: return "forward";
    case Maneuver::kRight: return "right";
  }
  return "?";
}

const char* to_string(Arm arm) {
  switch (arm) {
    case Arm::kSouth: return "south";
    case Arm::kWest: return "west";
    case Arm::kNorth: return "north";
    case Arm::kEast: return "east";
  }
  return "?";
}

const char* to_string(RelativeArm arm) {
  switch (arm) {
    case RelativeArm::kLeft: return "left";
    case RelativeArm::kFront: return "front";
    case RelativeArm::kRight: return "right";
  }
  return "?";
}

namespace {

Protocol protocol_from_string(const std::string& s) {
  if (s == "none") return Protocol::kNone;
  if (s == "oadmm") return Protocol::kOaAdmm;
  if (s == "reactive") return Protocol::kReactive;
  if (s == "predictive") return Protocol::kPredictive;
  throw std::invalid_argument("unknown protocol: " + s);
}

Maneuver maneuver_from_string(const std::string& s) {
  if (s == "left") return Maneuver::kLeft;
  if (s == "forward") return Maneuver::kForward;
  if (s == "right") return Maneuver::kRight;
  throw std::invalid_argument("unknown maneuver: " + s);
}

Arm arm_from_string(const std::string& s) {
  if (s == "south") return Arm::kSouth;
  if (s == "west") return Arm::kWest;
  if (s == "north") return Arm::kNorth;
  if (s == "east") return Arm::kEast;
  throw std::invalid_argument("unknown arm: " + s);
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

ScenarioSpec parse_scenario_text(const std::string& text) {
  ScenarioSpec spec;
  spec.vehicles.clear();
  std::istringstream stream(text);
  std::string line;
  std::string section;
  VehicleSpec* vehicle = nullptr;

  while (std::getline(stream, line)) {
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      if (section == "vehicle") {
        spec.vehicles.push_back(VehicleSpec{});
        vehicle = &spec.vehicles.back();
      } else if (section != "scenario") {
        throw std::invalid_argument("unknown section: [" + section + "]");
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("expected key = value: " + line);
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (section == "scenario") {
      if (key == "seed") spec.seed = std::stoul(value);
      else if (key == "protocol") spec.protocol = protocol_from_string(value);
      else if (key == "reference_speed") spec.reference_speed = std::stod(value);
      else if (key == "speed_jitter") spec.speed_jitter = std::stod(value);
      else if (key == "grid_fidelity") spec.grid_fidelity = std::stoi(value);
      else if (key == "intersection_half_width") spec.geometry.half_width = std::stod(value);
      else if (key == "lane_offset") spec.geometry.lane_offset = std::stod(value);
      else if (key == "spawn_distance") spec.geometry.spawn_distance = std::stod(value);
      else if (key == "finish_distance") spec.geometry.finish_distance = std::stod(value);
      else throw std::invalid_argument("unknown scenario key: " + key);
    } else if (section == "vehicle" && vehicle != nullptr) {
      if (key == "arm") vehicle->arm = arm_from_string(value);
      else if (key == "maneuver") vehicle->maneuver = maneuver_from_string(value);
      else if (key == "model") {
        if (value == "bicycle") vehicle->model = agent::DynamicsModel::kBicycle;
        else if (value == "holonomic") vehicle->model = agent::DynamicsModel::kHolonomic;
        else throw std::invalid_argument("unknown model: " + value);
      } else {
        throw std::invalid_argument("unknown vehicle key: " + key);
      }
    } else {
      throw std::invalid_argument("key outside of a section: " + line);
    }
  }
  if (spec.vehicles.empty()) {
    throw std::invalid_argument("scenario defines no vehicles");
  }
  return spec;
}

ScenarioSpec load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario_text(buffer.str());
}

std::string scenario_to_text(const ScenarioSpec& spec) {
  std::ostringstream out;
  out << "[scenario]\n";
  out << "seed = " << spec.seed << "\n";
  out << "protocol = " << to_string(spec.protocol) << "\n";
  out << "reference_speed = " << spec.reference_speed << "\n";
  out << "speed_jitter = " << spec.speed_jitter << "\n";
  out << "grid_fidelity = " << spec.grid_fidelity << "\n";
  out << "intersection_half_width = " << spec.geometry.half_width << "\n";
  out << "lane_offset = " << spec.geometry.lane_offset << "\n";
  out << "spawn_distance = " << spec.geometry.spawn_distance << "\n";
  out << "finish_distance = " << spec.geometry.finish_distance << "\n";
  for (const VehicleSpec& vehicle : spec.vehicles) {
    out << "\n[vehicle]\n";
    out << "arm = " << to_string(vehicle.arm) << "\n";
    out << "maneuver = " << to_string(vehicle.maneuver) << "\n";
    out << "model = "
        << (vehicle.model == agent::DynamicsModel::kBicycle ? "bicycle"
                                                            : "holonomic")
        << "\n";
  }
  return out.str();
}

}  // namespace oadmm::sim
