/*
 * Copyright 2026 The uhlab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "uhlab/base_dynamics.hpp"
#include "uhlab/errors.hpp"

using namespace uhlab;

TEST(BaseDynamics, IdentityRotationFixesPoints) {
  const auto d = BaseDynamics::rotation(0.0);
  EXPECT_EQ(d.step(BasePoint(0.3))[0], 0.3);
}

TEST(BaseDynamics, SkewShiftStep) {
  const auto d = BaseDynamics::skew_shift(0.125);
  const auto q = d.step(BasePoint(0.25, 0.5));
  EXPECT_DOUBLE_EQ(q[0], 0.375);
  EXPECT_DOUBLE_EQ(q[1], 0.75);
  const auto back = d.inverse_step(BasePoint(0.375, 0.75));
  EXPECT_DOUBLE_EQ(back[0], 0.25);
  EXPECT_DOUBLE_EQ(back[1], 0.5);
}

TEST(BaseDynamics, RotationInverseWraps) {
  const auto d = BaseDynamics::rotation(0.25);
  EXPECT_DOUBLE_EQ(d.inverse_step(BasePoint(0.0))[0], 0.75);
}

TEST(BaseDynamics, StepAndInverseAreMutuallyInverse) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& d : {BaseDynamics::skew_shift(kGoldenFrequency), BaseDynamics::rotation2(0.3, kGoldenFrequency)}) {
    double err = 0.0;
    for (int i = 0; i < 10000; ++i) {
      const BasePoint p(u(rng), u(rng));
      const auto a = d.inverse_step(d.step(p));
      const auto b = d.step(d.inverse_step(p));
      for (int c = 0; c < 2; ++c) {
        err = std::max({err, circle_distance(a[c], p[c]), circle_distance(b[c], p[c])});
      }
    }
    EXPECT_LE(err, 1e-15);
  }
}

TEST(BaseDynamics, SkewShiftFactorIsTheRotation) {
  const auto d = BaseDynamics::skew_shift(kGoldenFrequency);
  const auto r = BaseDynamics::rotation(kGoldenFrequency);
  BasePoint p(0.1, 0.9), q(0.1);
  for (int i = 0; i < 1000; ++i) {
    p = d.step(p);
    q = r.step(q);
    ASSERT_EQ(p[0], q[0]);
  }
}

TEST(BaseDynamics, PointsOutsideUnitIntervalRejected) {
  EXPECT_THROW(BasePoint(1.0), Error);
  EXPECT_THROW(BasePoint(0.2, -0.1), Error);
  try {
    BaseDynamics::rotation(0.1).step(BasePoint(0.1, 0.1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
}

TEST(Orbit, RotationQuarters) {
  const auto o = orbit(BaseDynamics::rotation(0.25), BasePoint(0.0), 0, 3);
  ASSERT_EQ(o.size(), 4u);
  const double want[] = {0.0, 0.25, 0.5, 0.75};
  for (int i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(o[i][0], want[i]);
}

TEST(Orbit, SingletonAndLastElement) {
  const auto d = BaseDynamics::skew_shift(kGoldenFrequency);
  const BasePoint p(0.2, 0.7);
  const auto one = orbit(d, p, 0, 0);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0], p);
  const auto o = orbit(d, p, 0, 37);
  EXPECT_EQ(o.back(), d.power(p, 37));
  const auto neg = orbit(d, p, -5, 0);
  EXPECT_LE(point_distance(neg.back(), p), 1e-15);
  EXPECT_EQ(neg.front(), d.power(p, -5));
}

TEST(Orbit, GoldenSkewShiftOrbitHasNoRepeats) {
  const auto o = orbit(BaseDynamics::skew_shift(kGoldenFrequency), BasePoint(0.0, 0.0), 0, 10000);
  auto pts = o;
  std::sort(pts.begin(), pts.end(), [](const BasePoint& a, const BasePoint& b) { return a.coords() < b.coords(); });
  double gap = 1.0;
  for (std::size_t i = 1; i < pts.size(); ++i) gap = std::min(gap, point_distance(pts[i], pts[i - 1]));
  EXPECT_GT(gap, 0.0);
}

TEST(Grid, LatticeShapes) {
  const auto g1 = make_grid(1, 4);
  ASSERT_EQ(g1.size(), 4u);
  for (int i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(g1.points[i][0], 0.25 * i);
  const auto g2 = make_grid(BaseDynamics::skew_shift(0.3), 3);
  EXPECT_EQ(g2.size(), 9u);
  EXPECT_EQ(g2.dim, 2);
  EXPECT_THROW(make_grid(1, 1), Error);
}

TEST(Grid, MeshBoundedByResolution) {
  const auto g = make_grid(2, 16);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const BasePoint p(u(rng), u(rng));
    double best = 1.0;
    for (const auto& q : g.points) best = std::min(best, point_distance(p, q));
    EXPECT_LE(best, 1.0 / 16);
  }
}

TEST(SupportBox, BumpVanishesOnCollarAndOutside) {
  const SupportBox box(2, {0.9, 0.0}, {0.2, 1.0});
  EXPECT_TRUE(box.contains(BasePoint(0.95, 0.3)));
  EXPECT_TRUE(box.contains(BasePoint(0.05, 0.3)));
  EXPECT_FALSE(box.contains(BasePoint(0.15, 0.3)));
  EXPECT_DOUBLE_EQ(box.bump(BasePoint(0.0, 0.5)), 1.0);
  EXPECT_EQ(box.bump(BasePoint(0.905, 0.5)), 0.0);
  EXPECT_EQ(box.bump(BasePoint(0.5, 0.5)), 0.0);
  const double mid = box.bump(BasePoint(0.93, 0.5));
  EXPECT_GT(mid, 0.0);
  EXPECT_LT(mid, 1.0);
}
