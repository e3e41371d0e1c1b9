#pragma once

#include <Eigen/Dense>
#include <vector>

namespace oadmm::geom {

/// A 2-D pose: planar position plus heading angle (rad).
struct Pose2 {
  Eigen::Vector2d position{0.0, 0.0};
  double heading = 0.0;
};

/// Shape parameters of a capsule, independent of where it is posed.
/// A zero-length template is a disc.
struct CapsuleTemplate {
  double length = 0.0;
  double radius = 0.5;
};

/// A line segment [p0, p1] inflated by `radius`. The collision primitive
/// for both vehicles and holonomic robots (length 0).
struct Capsule {
  Eigen::Vector2d p0{0.0, 0.0};
  Eigen::Vector2d p1{0.0, 0.0};
  double radius = 0.5;

  double length() const { return (p1 - p0).norm(); }

  static Capsule disc(const Eigen::Vector2d& center, double radius);

  /// Segment centered on the pose, aligned with the pose heading.
  static Capsule posed(const CapsuleTemplate& shape, const Pose2& pose);
};

struct SegmentClosest {
  double s = 0.0;  // parameter on segment a, in [0,1]
  double t = 0.0;  // parameter on segment b, in [0,1]
  Eigen::Vector2d on_a{0.0, 0.0};
  Eigen::Vector2d on_b{0.0, 0.0};
  double distance = 0.0;
};

/// Closest points between segments [a0,a1] and [b0,b1].
SegmentClosest closest_point_segment_segment(const Eigen::Vector2d& a0,
                                             const Eigen::Vector2d& a1,
                                             const Eigen::Vector2d& b0,
                                             const Eigen::Vector2d& b1);

/// Signed clearance between two capsules: segment-segment distance minus
/// the combined radii. Negative values are penetration depth. Exactly
/// symmetric in its arguments.
double capsule_clearance(const Capsule& a, const Capsule& b);

/// Per-step clearance between two equally long pose sequences with the
/// given capsule shapes. Throws std::invalid_argument on length mismatch.
Eigen::VectorXd clearance_along_poses(const std::vector<Pose2>& poses_a,
                                      const std::vector<Pose2>& poses_b,
                                      const CapsuleTemplate& shape_a,
                                      const CapsuleTemplate& shape_b);

}  // namespace oadmm::geom
