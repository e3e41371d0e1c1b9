#include "oadmm/geometry/halfspace.hpp"

namespace oadmm::geom {

Halfspace separating_halfspace(const Capsule& a, const Capsule& b) {
  const SegmentClosest c = closest_point_segment_segment(a.p0, a.p1, b.p0, b.p1);
  constexpr double kTiny = 1e-12;

  Eigen::Vector2d normal;
  if (c.distance > kTiny) {
    normal = (c.on_a - c.on_b) / c.distance;
  } else {
    // Segments touch or cross; take the penetration axis from the midpoint
    // separation, with a fixed world-x fallback for coincident capsules.
    const Eigen::Vector2d mid_a = 0.5 * (a.p0 + a.p1);
    const Eigen::Vector2d mid_b = 0.5 * (b.p0 + b.p1);
    const Eigen::Vector2d diff = mid_a - mid_b;
    const double n = diff.norm();
    normal = n > kTiny ? Eigen::Vector2d(diff / n) : Eigen::Vector2d(1.0, 0.0);
  }

  const Eigen::Vector2d anchor = 0.5 * (c.on_a + c.on_b);
  return Halfspace{normal, normal.dot(anchor)};
}

}  // namespace oadmm::geom
