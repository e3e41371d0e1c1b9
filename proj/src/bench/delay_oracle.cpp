#include <cmath>
#include <numbers>

#include "oadmm/bench/delay_oracle.hpp"
#include "oadmm/geometry/capsule.hpp"
#include "oadmm/sim/world.hpp"

namespace oadmm::bench {

namespace {

struct SampledPath {
  std::vector<double> s;
  std::vector<geom::Pose2> poses;
};

SampledPath sample(const sim::ReferencePath& path, double ds, double s_begin,
                   double s_end) {
  SampledPath out;
  for (double s = s_begin; s <= s_end; s += ds) {
    out.s.push_back(s);
    out.poses.push_back(geom::Pose2{path.position(s), path.heading(s)});
  }
  return out;
}

double folded_angle(double a, double b) {
  double diff = std::remainder(a - b, 2.0 * std::numbers::pi);
  return std::abs(diff);  // in [0, pi]
}

struct EntrySearch {
  bool found = false;
  double ego_s = 0.0;
  double other_s = 0.0;
};

// Earliest conflicting sample pair by combined arrival, skipping
// co-directional (following) geometry.
EntrySearch scan(const SampledPath& ego, const SampledPath& other,
                 const geom::CapsuleTemplate& shape,
                 const DelayOracleConfig& config) {
  EntrySearch best;
  double best_key = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < ego.poses.size(); ++i) {
    const geom::Capsule ego_capsule = geom::Capsule::posed(shape, ego.poses[i]);
    for (size_t j = 0; j < other.poses.size(); ++j) {
      const double angle =
          folded_angle(ego.poses[i].heading, other.poses[j].heading);
      if (angle < config.follow_angle) continue;
      const double clearance = geom::capsule_clearance(
          ego_capsule, geom::Capsule::posed(shape, other.poses[j]));
      if (clearance >= config.conflict_clearance) continue;
      const double key = ego.s[i] + other.s[j];
      if (key < best_key) {
        best_key = key;
        best.found = true;
        best.ego_s = ego.s[i];
        best.other_s = other.s[j];
      }
    }
  }
  return best;
}

}  // namespace

EstimatedDelay estimated_delay(const sim::ConflictCase& conflict_case,
                               const sim::IntersectionGeometry& geometry,
                               double reference_speed,
                               const DelayOracleConfig& config) {
  const sim::ReferencePath ego_path =
      sim::make_intersection_path(sim::Arm::kSouth, conflict_case.ego, geometry);
  const sim::ReferencePath other_path = sim::make_intersection_path(
      sim::absolute_arm(conflict_case.other_arm), conflict_case.other, geometry);
  const geom::CapsuleTemplate shape =
      sim::default_shape(agent::DynamicsModel::kBicycle);

  // Conflicts live inside and just past the box; sampling to the finish
  // line covers them.
  const SampledPath ego_coarse =
      sample(ego_path, config.coarse_ds, 0.0, ego_path.finish_s);
  const SampledPath other_coarse =
      sample(other_path, config.coarse_ds, 0.0, other_path.finish_s);

  EstimatedDelay result;
  const EntrySearch coarse = scan(ego_coarse, other_coarse, shape, config);
  if (!coarse.found) return result;

  const double window = 2.0 * config.coarse_ds;
  const SampledPath ego_fine =
      sample(ego_path, config.fine_ds, std::max(0.0, coarse.ego_s - window),
             std::min(ego_path.finish_s, coarse.ego_s + window));
  const SampledPath other_fine = sample(
      other_path, config.fine_ds, std::max(0.0, coarse.other_s - window),
      std::min(other_path.finish_s, coarse.other_s + window));
  const EntrySearch entry = scan(ego_fine, other_fine, shape, config);
  const double ego_heading = ego_path.heading(entry.found ? entry.ego_s
                                                          : coarse.ego_s);
  const double other_heading =
      other_path.heading(entry.found ? entry.other_s : coarse.other_s);

  result.no_conflict = false;
  result.crossing_angle = folded_angle(ego_heading, other_heading);
  const double sin_crossing =
      std::max(std::sin(result.crossing_angle), std::sin(config.follow_angle));
  const double clearing_width = 2.0 * shape.radius + config.clearance_margin;
  result.seconds = clearing_width / (reference_speed * sin_crossing);
  return result;
}

std::vector<EstimatedDelay> estimated_delay_table(
    const sim::IntersectionGeometry& geometry, double reference_speed,
    const DelayOracleConfig& config) {
  const std::vector<sim::ConflictCase> cases = sim::enumerate_conflict_cases();
  std::vector<EstimatedDelay> table;
  table.reserve(cases.size());
  for (const sim::ConflictCase& conflict_case : cases) {
    table.push_back(
        estimated_delay(conflict_case, geometry, reference_speed, config));
  }
  return table;
}

double mean_estimated_delay(const sim::IntersectionGeometry& geometry,
                            double reference_speed,
                            const DelayOracleConfig& config) {
  const std::vector<EstimatedDelay> table =
      estimated_delay_table(geometry, reference_speed, config);
  double sum = 0.0;
  for (const EstimatedDelay& entry : table) sum += entry.seconds;
  return sum / static_cast<double>(table.size());
}

}  // namespace oadmm::bench
