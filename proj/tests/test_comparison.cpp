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
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "toponogov/comparison.hpp"

namespace {

using namespace toponogov;
constexpr double kPi = std::numbers::pi;

TEST(Perimeter, Literals) {
  EXPECT_DOUBLE_EQ(perimeter(3, 4, 5), 12.0);
  EXPECT_DOUBLE_EQ(perimeter(1, 1, 0), 2.0);
  EXPECT_DOUBLE_EQ(perimeter(kPi / 2, kPi / 2, kPi / 2), 1.5 * kPi);
}

TEST(ComparisonAngle, Literals) {
  Plane pl;
  EXPECT_NEAR(comparison_angle(Curvature{0.0}, pl, {0, 0}, {3, 0}, {0, 4}), kPi / 2, 1e-15);
  EXPECT_NEAR(comparison_angle(Curvature{0.0}, pl, {0, 0}, {-1, 0}, {2, 0}), kPi, 1e-15);
  Sphere sp(1.0);
  EXPECT_NEAR(comparison_angle(Curvature{1.0}, sp, sp.north_pole(), {1, 0, 0}, {0, 1, 0}), kPi / 2, 1e-15);
  EXPECT_THROW(comparison_angle(Curvature{0.0}, pl, {0, 0}, {0, 0}, {1, 0}), DomainError);
}

TEST(UpperAngle, Literals) {
  Plane pl;
  const auto a = upper_angle(Curvature{0.0}, make_hinge(pl, {0, 0}, {1, 0}, {0, 1}));
  EXPECT_NEAR(a.value, kPi / 2, 1e-12);
  EXPECT_LT(a.uncertainty, 1e-10);
  EXPECT_EQ(a.samples.size(), 20u);

  Sphere sp(1.0);
  const auto m = upper_angle(Curvature{0.0}, make_hinge(sp, sp.north_pole(), sp.from_angles(0.5, 0.0), sp.from_angles(0.5, 1.0)));
  EXPECT_NEAR(m.value, 1.0, 1e-7);

  Cone c(3 * kPi);
  const auto r = upper_angle(Curvature{0.0}, make_hinge(c, c.apex(), c.point(1, 0), c.point(1, 2.5 * kPi)));
  EXPECT_NEAR(r.value, oracle::cone_apex_angle(3 * kPi, 0, 2.5 * kPi), 1e-12);
  EXPECT_NEAR(r.value, 0.5 * kPi, 1e-12);

  LadderConfig too_big;
  too_big.initial_scale = 2.0;
  EXPECT_THROW(upper_angle(Curvature{0.0}, make_hinge(pl, {0, 0}, {1, 0}, {0, 1}), too_big), DomainError);
}

TEST(UpperAngle, MatchesEmbeddedAngle) {
  Rng rng(1);
  Sphere sp(1.0);
  Hyperbolic h;
  for (int i = 0; i < 100; ++i) {
    const auto p = sp.sample_near(sp.north_pole(), 1.0, rng), x = sp.sample_near(sp.north_pole(), 1.0, rng),
               y = sp.sample_near(sp.north_pole(), 1.0, rng);
    if (sp.distance(p, x) < 0.05 || sp.distance(p, y) < 0.05) continue;
    EXPECT_NEAR(upper_angle(Curvature{1.0}, make_hinge(sp, p, x, y)).value, oracle::sphere_angle(p, x, y), 1e-7);
    const auto hp = h.sample_near(h.origin(), 1.0, rng), hx = h.sample_near(h.origin(), 1.0, rng),
               hy = h.sample_near(h.origin(), 1.0, rng);
    if (h.distance(hp, hx) < 0.05 || h.distance(hp, hy) < 0.05) continue;
    EXPECT_NEAR(upper_angle(Curvature{-1.0}, make_hinge(h, hp, hx, hy)).value, oracle::hyper_angle(hp, hx, hy), 1e-7);
  }
}

TEST(UpperAngle, KappaIndependent) {
  Rng rng(2);
  Sphere sp(1.0);
  for (int i = 0; i < 50; ++i) {
    const auto h = sample_hinge_near(sp, sp.north_pole(), 0.6, 0.05, rng);
    const auto a = upper_angle(Curvature{-1.0}, h), b = upper_angle(Curvature{0.0}, h), c = upper_angle(Curvature{1.0}, h);
    EXPECT_LE(std::abs(a.value - c.value), a.uncertainty + c.uncertainty + 1e-9);
    EXPECT_LE(std::abs(a.value - b.value), a.uncertainty + b.uncertainty + 1e-9);
  }
}

template <class S>
void expect_monotone_samples(const AngleEstimate& e, double tol) {
  int up = 0, down = 0;
  for (std::size_t i = 1; i < e.samples.size(); ++i) {
    const double d = e.samples[i].second - e.samples[i - 1].second;
    if (d > tol) ++up;
    if (d < -tol) ++down;
  }
  EXPECT_TRUE(up == 0 || down == 0) << up << " " << down;
}

TEST(UpperAngle, MonotoneSamples) {
  Rng rng(3);
  Sphere sp(1.0);
  Hyperbolic hy;
  Cone cone(1.5 * kPi);
  for (int i = 0; i < 40; ++i) {
    const auto h = sample_hinge_near(sp, sp.north_pole(), 0.7, 0.05, rng);
    const auto e = upper_angle(Curvature{1.0}, h);
    for (const auto& s : e.samples) EXPECT_NEAR(s.second, e.value, 1e-9);
    const auto hh = sample_hinge_near(hy, hy.origin(), 0.7, 0.05, rng);
    const auto eh = upper_angle(Curvature{-1.0}, hh);
    for (const auto& s : eh.samples) EXPECT_NEAR(s.second, eh.value, 1e-9);
    expect_monotone_samples<Cone>(upper_angle(Curvature{0.0}, sample_hinge_near(cone, cone.apex(), 1.0, 0.05, rng)), 1e-9);
  }
}

TEST(UpperAngle, TriangleInequality) {
  Rng rng(4);
  auto run = [&](const auto& space, const auto& center) {
    for (int i = 0; i < 100; ++i) {
      const auto p = space.sample_near(center, 0.5, rng);
      const auto x = space.sample_near(center, 0.5, rng), y = space.sample_near(center, 0.5, rng),
                 z = space.sample_near(center, 0.5, rng);
      if (space.distance(p, x) < 0.02 || space.distance(p, y) < 0.02 || space.distance(p, z) < 0.02) continue;
      const Curvature k{0.0};
      const double xy = upper_angle(k, make_hinge(space, p, x, y)).value;
      const double yz = upper_angle(k, make_hinge(space, p, y, z)).value;
      const double xz = upper_angle(k, make_hinge(space, p, x, z)).value;
      EXPECT_GE(xy + yz, xz - 1e-6);
    }
  };
  run(Plane{}, Plane{}.base_point());
  run(Sphere(1.0), Sphere(1.0).base_point());
  run(Hyperbolic{}, Hyperbolic{}.base_point());
  run(Cone(1.5 * kPi), Cone(1.5 * kPi).point(0.2, 0.0));
  run(Cone(3 * kPi), Cone(3 * kPi).point(0.2, 0.0));
}

TEST(CheckProperty, ModelSpacesAttainEquality) {
  Rng rng(5);
  Sphere sp(1.0);
  Plane pl;
  for (int i = 0; i < 30; ++i) {
    const auto h = sample_hinge_near(sp, sp.north_pole(), 1.2, 0.1, rng);
    for (Property p : {Property::kAngle, Property::kHinge, Property::kDistance}) {
      const Verdict v = check_property(p, Curvature{1.0}, h);
      EXPECT_TRUE(v.passed);
      EXPECT_LT(std::abs(v.worst_margin), 1e-6) << property_name(p);
    }
    const Verdict a = check_property(Property::kAngle, Curvature{0.0}, sample_hinge_near(pl, pl.base_point(), 2.0, 0.1, rng));
    EXPECT_TRUE(a.passed);
    EXPECT_LT(std::abs(a.worst_margin), 1e-8);
  }
}

TEST(CheckProperty, ConeAcrossApexFails) {
  const double theta = 2.5 * kPi, g = 1.25 * kPi;
  Cone c(theta);
  const auto h = make_hinge(c, c.point(1, 0.5 * g), c.point(1, 0), c.point(1, g));
  const oracle::ConePt p{1, 0.5 * g}, x{1, 0}, y{1, g};
  const double angle = oracle::cone_hinge_angle(theta, p, x, y);
  const double cmp = oracle::flat_angle(oracle::cone_dist(theta, p, x), oracle::cone_dist(theta, p, y),
                                        oracle::cone_dist(theta, x, y));
  EXPECT_NEAR(angle, 0.375 * kPi, 1e-12);
  const Verdict v = check_property(Property::kAngle, Curvature{0.0}, h);
  EXPECT_FALSE(v.passed);
  EXPECT_NEAR(v.worst_margin, angle - cmp, 1e-9);
  EXPECT_LT(v.worst_margin, -0.1);
  EXPECT_FALSE(check_property(Property::kHinge, Curvature{0.0}, h).passed);
  EXPECT_FALSE(check_property(Property::kDistance, Curvature{0.0}, h).passed);
}

TEST(CheckProperty, PerimeterBound) {
  Sphere sp(1.0);
  const auto h = make_hinge(sp, sp.north_pole(), sp.from_angles(1.0, 0.0), sp.from_angles(1.0, kPi / 2));
  EXPECT_NO_THROW(check_property(Property::kAngle, Curvature{1.0}, h));
  EXPECT_THROW(check_property(Property::kAngle, Curvature{4.0}, h), DomainError);
  EXPECT_THROW(check_property(Property::kBalanced, Curvature{0.0}, h), DomainError);
}

TEST(CheckProperty, ImplicationChain) {
  Rng rng(6);
  auto run = [&](const auto& space, const auto& center, double radius, double k) {
    int d_passed = 0;
    for (int i = 0; i < 40; ++i) {
      const auto h = sample_hinge_near(space, center, radius, 0.05, rng);
      const Verdict d = check_property(Property::kDistance, Curvature{k}, h);
      const Verdict a = check_property(Property::kAngle, Curvature{k}, h);
      const Verdict hv = check_property(Property::kHinge, Curvature{k}, h);
      if (d.passed) {
        ++d_passed;
        EXPECT_TRUE(a.passed);
        EXPECT_TRUE(hv.passed);
      }
      if (std::abs(a.worst_margin) > 1e-5) {
        EXPECT_EQ(a.passed, hv.passed);
      }
    }
    return d_passed;
  };
  EXPECT_EQ(run(Sphere(1.0), Sphere(1.0).base_point(), 1.0, 1.0), 40);
  EXPECT_EQ(run(Sphere(1.0), Sphere(1.0).base_point(), 1.0, 0.5), 40);
  EXPECT_EQ(run(Hyperbolic{}, Hyperbolic{}.base_point(), 1.0, -1.0), 40);
  EXPECT_EQ(run(Cone(1.5 * kPi), Cone(1.5 * kPi).apex(), 1.0, 0.0), 40);
  run(Cone(3 * kPi), Cone(3 * kPi).apex(), 1.0, 0.0);
  run(Sphere(1.0), Sphere(1.0).base_point(), 1.0, 1.5);
}

// If every hinge with one side inside a side of H and the other endpoint on
// the other side satisfies (A), H satisfies (D).
TEST(CheckProperty, AngleOnSubHingesGivesDistance) {
  Rng rng(7);
  Cone c(1.5 * kPi);
  for (int i = 0; i < 20; ++i) {
    const auto h = sample_hinge_near(c, c.apex(), 1.0, 0.1, rng);
    bool all = true;
    for (double f : {0.25, 0.5, 0.75, 1.0}) {
      all = all && check_property(Property::kAngle, Curvature{0.0}, Hinge<Cone>(h.side_x().sub(0, f * h.side_x().length()),
                                                                                  c.segment(h.vertex(), h.y())))
                       .passed;
      all = all && check_property(Property::kAngle, Curvature{0.0}, Hinge<Cone>(c.segment(h.vertex(), h.x()),
                                                                                  h.side_y().sub(0, f * h.side_y().length())))
                       .passed;
    }
    if (all) {
      EXPECT_TRUE(check_property(Property::kDistance, Curvature{0.0}, h).passed);
    }
  }
}

TEST(Balanced, RiemannianSegments) {
  Plane pl;
  const auto seg = pl.segment({0, 0}, {3, 1});
  std::vector<BalanceProbe<Plane>> probes{{0.5, {2, 2}}, {1.5, {-1, 4}}, {3.0, {1, -2}}};
  const Verdict v = check_balanced(pl, seg, probes);
  EXPECT_TRUE(v.passed);
  EXPECT_LT(std::abs(v.worst_margin), 1e-8);

  Sphere sp(1.0);
  const auto sseg = sp.segment(sp.from_angles(kPi / 2, 0.0), sp.from_angles(kPi / 2, 1.5));
  std::vector<BalanceProbe<Sphere>> sprobes{{0.3, sp.from_angles(0.6, 0.2)}, {0.9, sp.from_angles(2.5, 1.9)},
                                            {1.2, sp.from_angles(1.2, 0.4)}};
  const Verdict sv = check_balanced(sp, sseg, sprobes);
  EXPECT_TRUE(sv.passed);
  EXPECT_LT(std::abs(sv.worst_margin), 1e-6);
  EXPECT_LE(sv.witness.at("max_excess"), 1e-6);
}

TEST(Balanced, ConeApex) {
  const double theta = 3 * kPi;
  Cone c(theta);
  const auto seg = c.segment(c.point(1, 0), c.point(1, kPi));
  ASSERT_DOUBLE_EQ(seg.length(), 2.0);
  // The probe ray at 2 pi is pi away from both halves of the segment.
  std::vector<BalanceProbe<Cone>> probes{{1.0, c.point(1, 2 * kPi)}};
  const Verdict v = check_balanced(c, seg, probes);
  const double sum = oracle::cone_apex_angle(theta, 0, 2 * kPi) + oracle::cone_apex_angle(theta, kPi, 2 * kPi);
  EXPECT_NEAR(sum, 2 * kPi, 1e-15);
  EXPECT_FALSE(v.passed);
  EXPECT_NEAR(v.witness.at("defect"), kPi - sum, 1e-12);
  // Away from the apex the cone is flat.
  std::vector<BalanceProbe<Cone>> flat{{0.5, c.point(1, 2 * kPi)}, {1.5, c.point(0.8, 2.2)}};
  EXPECT_TRUE(check_balanced(c, seg, flat).passed);
  EXPECT_THROW(check_balanced(c, seg, std::vector<BalanceProbe<Cone>>{{0.0, c.point(1, 1)}}), DomainError);
}

TEST(Balanced, CurvatureBoundedSpaces) {
  Rng rng(8);
  Cone c(1.5 * kPi);
  for (int i = 0; i < 20; ++i) {
    const auto a = c.sample_near(c.apex(), 1.0, rng), b = c.sample_near(c.apex(), 1.0, rng);
    if (c.distance(a, b) < 0.1) continue;
    const auto seg = c.segment(a, b);
    std::vector<BalanceProbe<Cone>> probes;
    for (int j = 1; j < 5; ++j) probes.push_back({seg.length() * j / 5, c.sample_near(c.apex(), 1.0, rng)});
    bool ok = true;
    for (const auto& pr : probes) ok = ok && c.distance(seg.point_at(pr.q), pr.y) > 1e-3;
    if (!ok) continue;
    const Verdict v = check_balanced(c, seg, probes);
    EXPECT_TRUE(v.passed) << v.worst_margin;
  }
}

TEST(Estimator, Literals) {
  Sphere sp(1.0);
  const auto e = estimate_curvature_floor(sp, sp.north_pole(), 0.1, {-4.0, 8.0});
  EXPECT_NEAR(e.kappa.value(), 1.0, 0.05);
  EXPECT_LT(e.upper - e.lower, 1e-2);
  EXPECT_NEAR(estimate_curvature_floor(Plane{}, Plane{}.base_point(), 0.5, {-4.0, 8.0}).kappa.value(), 0.0, 0.05);
  EXPECT_NEAR(estimate_curvature_floor(Hyperbolic{}, Hyperbolic{}.base_point(), 0.5, {-4.0, 8.0}).kappa.value(), -1.0, 0.05);
  EXPECT_THROW(estimate_curvature_floor(sp, sp.north_pole(), 0.1, {2.0, 8.0}), EstimationError);
  EXPECT_THROW(estimate_curvature_floor(sp, sp.north_pole(), 0.1, {-4.0, 0.5}), EstimationError);
}

TEST(Estimator, PredicateAroundTheAnswer) {
  // The same hinge sample as the estimator: passes (D) at 0.9, fails at 1.1.
  Sphere sp(1.0);
  Rng rng(0);
  bool all_09 = true, all_11 = true;
  for (int i = 0; i < 32; ++i) {
    const auto h = sample_hinge_near(sp, sp.north_pole(), 0.05, 0.005, rng);
    all_09 = all_09 && check_property(Property::kDistance, Curvature{0.9}, h).passed;
    all_11 = all_11 && check_property(Property::kDistance, Curvature{1.1}, h).passed;
  }
  EXPECT_TRUE(all_09);
  EXPECT_FALSE(all_11);
}

}  // namespace
