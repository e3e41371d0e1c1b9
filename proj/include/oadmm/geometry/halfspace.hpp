#pragma once

#include <Eigen/Dense>

#include "oadmm/geometry/capsule.hpp"

namespace oadmm::geom {

/// Halfspace {p : normal·p >= offset} with a unit normal.
struct Halfspace {
  Eigen::Vector2d normal{1.0, 0.0};
  double offset = 0.0;

  double signed_distance(const Eigen::Vector2d& p) const {
    return normal.dot(p) - offset;
  }
};

/// Separating (or penetration) plane between two capsules, anchored at the
/// midpoint of the minimum-distance witness pair, normal pointing from b
/// toward a.
///
/// Contract: if every point p on a's segment satisfies
///   normal·p >= offset + a.radius
/// and every point q on b's segment satisfies
///   normal·q <= offset - b.radius,
/// then capsule_clearance(a, b) >= 0.
///
/// When the witness points coincide the normal falls back to the direction
/// between segment midpoints, and for fully coincident capsules to the
/// world x-axis.
Halfspace separating_halfspace(const Capsule& a, const Capsule& b);

}  // namespace oadmm::geom
