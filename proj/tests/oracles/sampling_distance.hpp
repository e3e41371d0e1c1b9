#pragma once

#include "oadmm/geometry/capsule.hpp"

namespace oadmm::testing {

/// Dense-sampling clearance oracle: minimum point-point distance over a
/// parameter grid on both segments (with one refinement pass around the
/// coarse minimum), minus the combined radii.
double sampled_capsule_clearance(const geom::Capsule& a, const geom::Capsule& b,
                                 int coarse = 256, int refine = 256);

/// Single-resolution variant (the plain N x N grid).
double grid_capsule_clearance(const geom::Capsule& a, const geom::Capsule& b,
                              int samples);

}  // namespace oadmm::testing
