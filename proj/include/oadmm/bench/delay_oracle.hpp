#pragma once

#include "oadmm/sim/scenario.hpp"

namespace oadmm::bench {

/// Geometric estimated-delay model for a two-vehicle conflict case.
///
/// The yielding vehicle is blocked while the priority vehicle's body
/// traverses its corridor: the clearing displacement along the axis
/// orthogonal to the yielder's path is the priority vehicle's width plus a
/// clearance margin, and dividing by the orthogonal component of the
/// reference velocity gives the delay. The crossing angle is evaluated
/// where the priority path first enters the yielder's corridor; conflict
/// regions where the paths run co-directionally (within follow_angle) are
/// following situations and contribute no delay.
struct DelayOracleConfig {
  double clearance_margin = 0.6;   // extra clearing width beyond the body (m)
  double conflict_clearance = 0.5; // capsule clearance marking a conflict (m)
  double follow_angle = 0.35;      // rad; co-directional truncation (~20 deg)
  double coarse_ds = 0.2;          // first-pass path sampling (m)
  double fine_ds = 0.02;           // entry refinement sampling (m)
};

struct EstimatedDelay {
  double seconds = 0.0;
  bool no_conflict = true;
  double crossing_angle = 0.0;  // at the conflict entry (rad)
};

EstimatedDelay estimated_delay(const sim::ConflictCase& conflict_case,
                               const sim::IntersectionGeometry& geometry,
                               double reference_speed,
                               const DelayOracleConfig& config = {});

/// Per-case estimates for all 27 cases, in enumerate_conflict_cases order.
std::vector<EstimatedDelay> estimated_delay_table(
    const sim::IntersectionGeometry& geometry, double reference_speed,
    const DelayOracleConfig& config = {});

/// Mean over all 27 cases (zeros included).
double mean_estimated_delay(const sim::IntersectionGeometry& geometry,
                            double reference_speed,
                            const DelayOracleConfig& config = {});

}  // namespace oadmm::bench
