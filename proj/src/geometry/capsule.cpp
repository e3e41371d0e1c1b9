#include "oadmm/geometry/capsule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oadmm::geom {

Capsule Capsule::disc(const Eigen::Vector2d& center, double radius) {
  return Capsule{center, center, radius};
}

Capsule Capsule::posed(const CapsuleTemplate& shape, const Pose2& pose) {
  const Eigen::Vector2d axis(std::cos(pose.heading), std::sin(pose.heading));
  const Eigen::Vector2d half = 0.5 * shape.length * axis;
  return Capsule{pose.position - half, pose.position + half, shape.radius};
}

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

SegmentClosest closest_point_segment_segment(const Eigen::Vector2d& a0,
                                             const Eigen::Vector2d& a1,
                                             const Eigen::Vector2d& b0,
                                             const Eigen::Vector2d& b1) {
  // Ericson, Real-Time Collision Detection, 5.1.9, specialized to 2-D.
  const Eigen::Vector2d d1 = a1 - a0;
  const Eigen::Vector2d d2 = b1 - b0;
  const Eigen::Vector2d r = a0 - b0;
  const double la = d1.squaredNorm();
  const double lb = d2.squaredNorm();
  const double f = d2.dot(r);
  constexpr double kEps = 1e-18;

  double s = 0.0;
  double t = 0.0;
  if (la <= kEps && lb <= kEps) {
    // both degenerate to points
  } else if (la <= kEps) {
    t = clamp01(f / lb);
  } else {
    const double c = d1.dot(r);
    if (lb <= kEps) {
      s = clamp01(-c / la);
    } else {
      const double b = d1.dot(d2);
      const double denom = la * lb - b * b;
      if (denom > kEps) {
        s = clamp01((b * f - c * lb) / denom);
      }
      t = (b * s + f) / lb;
      if (t < 0.0) {
        t = 0.0;
        s = clamp01(-c / la);
      } else if (t > 1.0) {
        t = 1.0;
        s = clamp01((b - c) / la);
      }
    }
  }

  SegmentClosest out;
  out.s = s;
  out.t = t;
  out.on_a = a0 + s * d1;
  out.on_b = b0 + t * d2;
  out.distance = (out.on_a - out.on_b).norm();
  return out;
}

namespace {

// Lexicographic order on (p0, p1, radius); used to make pair queries
// symmetric at the bit level.
bool capsule_before(const Capsule& a, const Capsule& b) {
  const double ka[5] = {a.p0.x(), a.p0.y(), a.p1.x(), a.p1.y(), a.radius};
  const double kb[5] = {b.p0.x(), b.p0.y(), b.p1.x(), b.p1.y(), b.radius};
  for (int i = 0; i < 5; ++i) {
    if (ka[i] < kb[i]) return true;
    if (ka[i] > kb[i]) return false;
  }
  return true;
}

}  // namespace

double capsule_clearance(const Capsule& a, const Capsule& b) {
  const Capsule& first = capsule_before(a, b) ? a : b;
  const Capsule& second = capsule_before(a, b) ? b : a;
  const SegmentClosest c =
      closest_point_segment_segment(first.p0, first.p1, second.p0, second.p1);
  return c.distance - (a.radius + b.radius);
}

Eigen::VectorXd clearance_along_poses(const std::vector<Pose2>& poses_a,
                                      const std::vector<Pose2>& poses_b,
                                      const CapsuleTemplate& shape_a,
                                      const CapsuleTemplate& shape_b) {
  if (poses_a.size() != poses_b.size()) {
    throw std::invalid_argument("clearance_along_poses: horizon mismatch");
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(poses_a.size()));
  for (size_t k = 0; k < poses_a.size(); ++k) {
    out[static_cast<Eigen::Index>(k)] = capsule_clearance(
        Capsule::posed(shape_a, poses_a[k]), Capsule::posed(shape_b, poses_b[k]));
  }
  return out;
}

}  // namespace oadmm::geom
