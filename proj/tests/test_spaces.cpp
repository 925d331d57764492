/*
 * Copyright (c) 2026 The toponogov Authors. All Rights Reserved
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "toponogov/errors.hpp"
#include "toponogov/random.hpp"
#include "toponogov/spaces.hpp"

namespace {

using namespace toponogov;
constexpr double kPi = std::numbers::pi;

static_assert(GeodesicSpace<Plane>);
static_assert(GeodesicSpace<Sphere>);
static_assert(GeodesicSpace<Hyperbolic>);
static_assert(GeodesicSpace<Cone>);

template <class S>
void expect_isometric(const S& space, const typename S::Point& p, const typename S::Point& q) {
  const Segment<S> seg = space.segment(p, q);
  EXPECT_NEAR(seg.length(), space.distance(p, q), 1e-12);
  EXPECT_EQ(space.distance(seg.point_at(0.0), p), 0.0);
  EXPECT_EQ(space.distance(seg.point_at(seg.length()), q), 0.0);
  constexpr int n = 20;
  for (int i = 0; i <= n; ++i) {
    for (int j = i; j <= n; ++j) {
      const double s = seg.length() * i / n, t = seg.length() * j / n;
      EXPECT_NEAR(space.distance(seg.point_at(s), seg.point_at(t)), t - s, 1e-9);
    }
  }
}

TEST(Plane, DistanceAndSegments) {
  Plane pl;
  EXPECT_DOUBLE_EQ(pl.distance({0, 0}, {3, 4}), 5.0);
  const auto seg = pl.segment({0, 0}, {2, 0});
  EXPECT_NEAR((seg.point_at(0.5) - Eigen::Vector2d(0.5, 0)).norm(), 0.0, 1e-15);
  const auto seg4 = pl.segment({0, 0}, {4, 0});
  EXPECT_NEAR((interpolate(seg4, 1.0) - Eigen::Vector2d(1, 0)).norm(), 0.0, 1e-15);
  EXPECT_THROW(seg4.point_at(4.5), DomainError);
  EXPECT_THROW(seg4.point_at(-0.1), DomainError);
  EXPECT_THROW(pl.distance({NAN, 0}, {0, 0}), DomainError);
}

TEST(Sphere, DistanceMatchesDotProduct) {
  for (double r : {0.5, 1.0, 2.0}) {
    Sphere sp(r);
    EXPECT_NEAR(sp.distance(sp.north_pole(), sp.from_angles(kPi / 2, 0.3)), kPi / 2 * r, 1e-14);
    Rng rng(4);
    for (int i = 0; i < 2000; ++i) {
      const auto p = sp.sample_near(sp.north_pole(), 3.0 * r, rng);
      const auto q = sp.sample_near(sp.north_pole(), 3.0 * r, rng);
      EXPECT_NEAR(sp.distance(p, q), r * oracle::sphere_dist(p, q), 1e-10);
    }
  }
  Sphere sp(1.0);
  EXPECT_THROW(sp.distance({0, 0, 2}, {0, 0, 1}), DomainError);
}

TEST(Sphere, Segments) {
  Sphere sp(1.0);
  const auto seg = sp.segment(sp.north_pole(), sp.from_angles(kPi / 2, 0.7));
  EXPECT_NEAR((seg.point_at(kPi / 4) - sp.from_angles(kPi / 4, 0.7)).norm(), 0.0, 1e-14);
  EXPECT_THROW(sp.segment(sp.north_pole(), Eigen::Vector3d(0, 0, -1)), AmbiguityError);
  Rng rng(8);
  for (int i = 0; i < 50; ++i) {
    expect_isometric(sp, sp.sample_near(sp.north_pole(), 2.5, rng), sp.sample_near(sp.north_pole(), 2.5, rng));
  }
}

TEST(Hyperbolic, FarFromOriginStaysAccurate) {
  // Coordinates of size ~30 with segments of length ~5: the Minkowski norm
  // of intermediate vectors cancels to 1 from ~1e3.
  Hyperbolic h;
  Rng rng(21);
  for (int i = 0; i < 200; ++i) {
    const auto p = h.from_polar(rng.uniform(3.0, 4.0), rng.uniform(0.0, 6.28));
    const auto q = h.exp(p, rng.uniform(0.0, 6.28), rng.uniform(4.0, 6.0));
    const auto seg = h.segment(p, q);
    const double s = seg.length() * rng.uniform(0.05, 0.95);
    const auto m = seg.point_at(s);
    EXPECT_NO_THROW(h.validate(m));
    EXPECT_NEAR(h.distance(p, m), s, 1e-12);
    EXPECT_NEAR(h.distance(p, m) + h.distance(m, q), seg.length(), 1e-9);
  }
}

TEST(Hyperbolic, DistanceMatchesMinkowski) {
  Hyperbolic h;
  Rng rng(5);
  for (int i = 0; i < 2000; ++i) {
    const auto p = h.sample_near(h.origin(), 3.0, rng);
    const auto q = h.sample_near(h.origin(), 3.0, rng);
    EXPECT_NEAR(h.distance(p, q), oracle::hyper_dist(p, q), 1e-10 * std::max(1.0, h.distance(p, q)));
    EXPECT_NEAR(Hyperbolic::minkowski(p, p), -1.0, 1e-12 * std::max(1.0, p[0] * p[0]));
  }
  EXPECT_NEAR(h.distance(h.origin(), h.from_polar(2.0, 0.4)), 2.0, 1e-14);
  EXPECT_THROW(h.distance({1, 1, 0}, h.origin()), DomainError);
  for (int i = 0; i < 50; ++i) expect_isometric(h, h.sample_near(h.origin(), 2.0, rng), h.sample_near(h.origin(), 2.0, rng));
}

TEST(Cone, DistanceMatchesUnrolling) {
  for (double theta : {1.0, 1.5 * kPi, 2 * kPi, 2.5 * kPi, 3 * kPi, 4 * kPi}) {
    Cone c(theta);
    Rng rng(6);
    for (int i = 0; i < 2000; ++i) {
      const ConePoint p = c.point(2.0 * rng.uniform(), theta * rng.uniform());
      const ConePoint q = c.point(2.0 * rng.uniform(), theta * rng.uniform());
      const double d = c.distance(p, q);
      EXPECT_NEAR(d, oracle::cone_dist(theta, {p.r, p.phi}, {q.r, q.phi}), 1e-12);
      if (c.gap(p.phi, q.phi) >= kPi) {
        EXPECT_EQ(d, p.r + q.r);
      }
    }
  }
}

TEST(Cone, ThroughApex) {
  Cone c(3 * kPi);
  // Angular gap min(1.2 pi, 1.8 pi) = 1.2 pi >= pi.
  EXPECT_DOUBLE_EQ(c.distance(c.point(1, 0), c.point(1, 1.2 * kPi)), 2.0);
  Cone c4(4 * kPi);
  const auto seg = c4.segment(c4.point(1.0, 0.0), c4.point(0.7, 1.5 * kPi));
  EXPECT_DOUBLE_EQ(seg.length(), 1.7);
  EXPECT_EQ(seg.point_at(1.0).r, 0.0);
  expect_isometric(c4, c4.point(1.0, 0.0), c4.point(0.7, 1.5 * kPi));
}

TEST(Cone, SegmentsAreIsometric) {
  for (double theta : {1.0, 1.5 * kPi, 2.5 * kPi, 4 * kPi}) {
    Cone c(theta);
    Rng rng(12);
    for (int i = 0; i < 60; ++i) {
      expect_isometric(c, c.point(2.0 * rng.uniform(), theta * rng.uniform()),
                       c.point(2.0 * rng.uniform(), theta * rng.uniform()));
    }
    expect_isometric(c, c.apex(), c.point(1.0, 0.5 * theta));
    expect_isometric(c, c.point(1.0, 0.5 * theta), c.apex());
  }
}

TEST(Cone, TieGoesTowardIncreasingAngle) {
  // theta = pi: the two developments of (1,0) -> (1,pi/2) have equal length.
  Cone c(kPi);
  const auto seg = c.segment(c.point(1, 0), c.point(1, 0.5 * kPi));
  const ConePoint mid = seg.point_at(0.5 * seg.length());
  EXPECT_NEAR(mid.phi, 0.25 * kPi, 1e-12);
}

TEST(Cone, Validation) {
  EXPECT_THROW(Cone(0.0), DomainError);
  Cone c(2.0);
  EXPECT_THROW(c.distance({1.0, 2.5}, {1.0, 0.0}), DomainError);
  EXPECT_THROW(c.point(-1.0, 0.0), DomainError);
  EXPECT_EQ(c.curvature_floor(), std::optional<double>(0.0));
  EXPECT_FALSE(Cone(7.0).curvature_floor().has_value());
}

template <class S>
void expect_triangle_inequality(const S& space, const typename S::Point& center, double radius) {
  Rng rng(21);
  for (int i = 0; i < 10000; ++i) {
    const auto a = space.sample_near(center, radius, rng);
    const auto b = space.sample_near(center, radius, rng);
    const auto c = space.sample_near(center, radius, rng);
    EXPECT_LE(space.distance(a, c), space.distance(a, b) + space.distance(b, c) + 1e-10);
    EXPECT_EQ(space.distance(a, b), space.distance(b, a));
  }
}

TEST(Spaces, TriangleInequality) {
  expect_triangle_inequality(Plane{}, Plane{}.base_point(), 3.0);
  expect_triangle_inequality(Sphere(1.5), Sphere(1.5).base_point(), 4.0);
  expect_triangle_inequality(Hyperbolic{}, Hyperbolic{}.base_point(), 3.0);
  expect_triangle_inequality(Cone(3.0), Cone(3.0).base_point(), 2.0);
  expect_triangle_inequality(Cone(9.0), Cone(9.0).point(1.0, 1.0), 1.5);
}

TEST(Spaces, SampleNearStaysInBall) {
  Rng rng(2);
  Cone c(2.0);
  const auto center = c.point(0.4, 1.0);
  for (int i = 0; i < 1000; ++i) EXPECT_LE(c.distance(center, c.sample_near(center, 0.7, rng)), 0.7 + 1e-12);
  Sphere sp(2.0);
  for (int i = 0; i < 1000; ++i) EXPECT_LE(sp.distance(sp.north_pole(), sp.sample_near(sp.north_pole(), 1.0, rng)), 1.0 + 1e-12);
}

TEST(Spaces, CurvatureFloors) {
  EXPECT_EQ(Plane{}.curvature_floor(), std::optional<double>(0.0));
  EXPECT_DOUBLE_EQ(*Sphere(2.0).curvature_floor(), 0.25);
  EXPECT_EQ(Hyperbolic{}.curvature_floor(), std::optional<double>(-1.0));
}

}  // namespace
