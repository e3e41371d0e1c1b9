#include <doctest.h>

#include <random>

#include "oadmm/geometry/halfspace.hpp"
#include "oracles/sampling_distance.hpp"

using namespace oadmm;

namespace {

geom::Capsule random_capsule(std::mt19937_64& rng, double span = 10.0) {
  std::uniform_real_distribution<double> coord(-span, span);
  std::uniform_real_distribution<double> radius(0.2, 1.5);
  geom::Capsule capsule;
  capsule.p0 = {coord(rng), coord(rng)};
  capsule.p1 = {coord(rng), coord(rng)};
  capsule.radius = radius(rng);
  return capsule;
}

}  // namespace

TEST_CASE("capsule clearance: point capsules and identical capsules") {
  const geom::Capsule a = geom::Capsule::disc({0.0, 0.0}, 1.0);
  const geom::Capsule b = geom::Capsule::disc({3.0, 0.0}, 1.0);
  CHECK(geom::capsule_clearance(a, b) == doctest::Approx(1.0));

  geom::Capsule c;
  c.p0 = {1.0, 2.0};
  c.p1 = {4.0, 5.0};
  c.radius = 0.8;
  CHECK(geom::capsule_clearance(c, c) == doctest::Approx(-1.6));
}

TEST_CASE("capsule clearance matches the dense-sampling oracle") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 25; ++trial) {
    const geom::Capsule a = random_capsule(rng);
    const geom::Capsule b = random_capsule(rng);
    const double fast = geom::capsule_clearance(a, b);
    const double slow = testing::sampled_capsule_clearance(a, b);
    CHECK(fast == doctest::Approx(slow).epsilon(0).scale(1).epsilon(1e-3));
    CHECK(std::abs(fast - slow) < 1e-3);
  }
}

TEST_CASE("capsule clearance is exactly symmetric") {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 200; ++trial) {
    const geom::Capsule a = random_capsule(rng);
    const geom::Capsule b = random_capsule(rng);
    CHECK(geom::capsule_clearance(a, b) == geom::capsule_clearance(b, a));
  }
}

TEST_CASE("capsule clearance is rigid-motion invariant") {
  std::mt19937_64 rng(107);
  std::uniform_real_distribution<double> angle(-3.14, 3.14);
  std::uniform_real_distribution<double> shift(-50.0, 50.0);
  for (int trial = 0; trial < 100; ++trial) {
    const geom::Capsule a = random_capsule(rng);
    const geom::Capsule b = random_capsule(rng);
    const double base = geom::capsule_clearance(a, b);

    const double theta = angle(rng);
    const Eigen::Rotation2D<double> rot(theta);
    const Eigen::Vector2d t{shift(rng), shift(rng)};
    auto transform = [&](const geom::Capsule& c) {
      geom::Capsule out = c;
      out.p0 = rot * c.p0 + t;
      out.p1 = rot * c.p1 + t;
      return out;
    };
    const double moved = geom::capsule_clearance(transform(a), transform(b));
    CHECK(std::abs(moved - base) < 1e-9);
  }
}

TEST_CASE("clearance along poses: offset, identical, and diverging plans") {
  const geom::CapsuleTemplate shape{4.0, 1.0};
  std::vector<geom::Pose2> a, b;
  for (int k = 0; k < 10; ++k) {
    a.push_back(geom::Pose2{{1.0 * k, 0.0}, 0.0});
    b.push_back(geom::Pose2{{1.0 * k, 10.0}, 0.0});
  }
  SUBCASE("constant lateral offset matches the single-step primitive") {
    const Eigen::VectorXd clearances =
        geom::clearance_along_poses(a, b, shape, shape);
    for (int k = 0; k < 10; ++k) {
      const double expected = geom::capsule_clearance(
          geom::Capsule::posed(shape, a[static_cast<size_t>(k)]),
          geom::Capsule::posed(shape, b[static_cast<size_t>(k)]));
      CHECK(clearances[k] == doctest::Approx(expected));
      CHECK(clearances[k] == doctest::Approx(10.0 - 2.0));  // parallel capsules
    }
  }
  SUBCASE("identical plans: full penetration at every step") {
    const Eigen::VectorXd clearances =
        geom::clearance_along_poses(a, a, shape, shape);
    for (int k = 0; k < 10; ++k) {
      CHECK(clearances[k] == doctest::Approx(-2.0));
      CHECK(clearances[k] <= 0.0);
    }
  }
  SUBCASE("monotonically diverging plans give non-decreasing clearance") {
    std::vector<geom::Pose2> diverging;
    for (int k = 0; k < 10; ++k) {
      diverging.push_back(geom::Pose2{{1.0 * k, 2.0 + 0.8 * k}, 0.0});
    }
    const Eigen::VectorXd clearances =
        geom::clearance_along_poses(a, diverging, shape, shape);
    for (int k = 1; k < 10; ++k) {
      CHECK(clearances[k] >= clearances[k - 1] - 1e-12);
    }
  }
  SUBCASE("horizon mismatch is rejected") {
    std::vector<geom::Pose2> shorter(a.begin(), a.begin() + 5);
    CHECK_THROWS_AS(geom::clearance_along_poses(a, shorter, shape, shape),
                    std::invalid_argument);
  }
}

TEST_CASE("separating halfspace: disc examples") {
  SUBCASE("separated discs: plane between them, normal from b toward a") {
    const geom::Capsule a = geom::Capsule::disc({0.0, 0.0}, 1.0);
    const geom::Capsule b = geom::Capsule::disc({4.0, 0.0}, 1.0);
    const geom::Halfspace hs = geom::separating_halfspace(a, b);
    CHECK(hs.normal.x() == doctest::Approx(-1.0));
    CHECK(hs.normal.y() == doctest::Approx(0.0));
    // plane passes through x = 2
    CHECK(hs.offset == doctest::Approx(-2.0));
    CHECK(hs.signed_distance({2.0, 13.0}) == doctest::Approx(0.0));
  }
  SUBCASE("overlapping discs: normal along the center difference") {
    const geom::Capsule a = geom::Capsule::disc({1.0, 1.0}, 2.0);
    const geom::Capsule b = geom::Capsule::disc({2.0, 2.0}, 2.0);
    const geom::Halfspace hs = geom::separating_halfspace(a, b);
    const Eigen::Vector2d expected =
        (a.p0 - b.p0).normalized();
    CHECK(hs.normal.x() == doctest::Approx(expected.x()));
    CHECK(hs.normal.y() == doctest::Approx(expected.y()));
  }
  SUBCASE("coincident capsules fall back to the world x-axis") {
    const geom::Capsule a = geom::Capsule::disc({1.0, 1.0}, 0.5);
    const geom::Halfspace hs = geom::separating_halfspace(a, a);
    CHECK(hs.normal.x() == doctest::Approx(1.0));
    CHECK(hs.normal.y() == doctest::Approx(0.0));
  }
}

TEST_CASE("separating halfspace constraints imply non-penetration") {
  // Conservativeness: sampling capsule pairs whose segments satisfy the
  // halfspace constraints at the radius offsets must never penetrate.
  std::mt19937_64 rng(211);
  int checked = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const geom::Capsule a = random_capsule(rng, 5.0);
    const geom::Capsule b = random_capsule(rng, 5.0);
    const geom::Halfspace hs = geom::separating_halfspace(a, b);

    // Draw fresh capsules and shift them onto their constrained sides.
    geom::Capsule a2 = random_capsule(rng, 5.0);
    a2.radius = a.radius;
    const double need_a =
        hs.offset + a.radius -
        std::min(hs.normal.dot(a2.p0), hs.normal.dot(a2.p1));
    if (need_a > 0.0) {
      a2.p0 += need_a * hs.normal;
      a2.p1 += need_a * hs.normal;
    }
    geom::Capsule b2 = random_capsule(rng, 5.0);
    b2.radius = b.radius;
    const double need_b =
        std::max(hs.normal.dot(b2.p0), hs.normal.dot(b2.p1)) -
        (hs.offset - b.radius);
    if (need_b > 0.0) {
      b2.p0 -= need_b * hs.normal;
      b2.p1 -= need_b * hs.normal;
    }
    CHECK(geom::capsule_clearance(a2, b2) >= -1e-9);
    ++checked;
  }
  CHECK(checked == 10000);
}
