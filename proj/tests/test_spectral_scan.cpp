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

#include <cmath>
#include <numbers>

#include "uhlab/spectral_scan.hpp"

using namespace uhlab;

namespace {

constexpr double kPi = std::numbers::pi;
const BaseDynamics kCircle = BaseDynamics::rotation(kGoldenFrequency);

ScanParams small_scan() {
  ScanParams p;
  p.grid_resolution = 8;
  return p;
}

SpectralScan fake_scan(std::vector<Verdict> v, ScanAxis axis = ScanAxis::Line) {
  SpectralScan s;
  s.axis = axis;
  for (std::size_t i = 0; i < v.size(); ++i) {
    s.values.push_back(static_cast<double>(i));
    UHCertificate c;
    c.verdict = v[i];
    s.certificates.push_back(c);
  }
  return s;
}

}  // namespace

TEST(ScanJacobi, FreeModelBandEdges) {
  const auto one = SamplingMap::constant(Codomain::Real, 1, 1.0);
  const auto zero = SamplingMap::constant(Codomain::Real, 1, 0.0);
  const auto s = scan_jacobi(one, zero, kCircle, linear_grid(-3, 3, 1e-2), small_scan());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double E = s.values[i];
    if (std::abs(std::abs(E) - 2) <= 2e-3) continue;
    EXPECT_EQ(s.verdict(i) == Verdict::UH, std::abs(E) > 2) << E;
  }
  const auto g = gaps(s);
  ASSERT_EQ(g.gaps.size(), 2u);
  EXPECT_DOUBLE_EQ(g.gaps[0].lo, -3.0);
  EXPECT_NEAR(g.gaps[0].hi, -2.0, 1e-2);
  EXPECT_NEAR(g.gaps[1].lo, 2.0, 1e-2);
  EXPECT_DOUBLE_EQ(g.gaps[1].hi, 3.0);
}

TEST(ScanJacobi, ShiftedFreeModel) {
  const auto one = SamplingMap::constant(Codomain::Real, 1, 1.0);
  const auto c = SamplingMap::constant(Codomain::Real, 1, 0.7);
  const auto s = scan_jacobi(one, c, kCircle, linear_grid(-2, 4, 0.05), small_scan());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double E = s.values[i];
    if (std::abs(std::abs(E - 0.7) - 2) < 0.01) continue;
    EXPECT_EQ(s.verdict(i) == Verdict::UH, std::abs(E - 0.7) > 2) << E;
  }
}

TEST(ScanJacobi, RejectsUnsortedGrid) { EXPECT_THROW(scan_jacobi(SamplingMap::constant(Codomain::Real, 1, 1), SamplingMap::constant(Codomain::Real, 1, 0), kCircle, {0.0, -1.0}), Error); }

TEST(ScanCmv, ConstantCoefficientArcs) {
  for (double r : {0.5, 0.8}) {
    const auto f = SamplingMap::constant(Codomain::Disk, 1, r);
    const auto s = scan_cmv(f, kCircle, circle_grid(1e-2), small_scan());
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double psi = s.values[i];
      const double m = std::abs(std::sin(psi / 2)) - r;
      if (std::abs(m) < 5e-3) continue;
      EXPECT_EQ(s.verdict(i) == Verdict::UH, m < 0) << r << " " << psi;
    }
    const auto g = gaps(s);
    ASSERT_EQ(g.gaps.size(), 1u);
    // One arc through psi = 0 of half-width 2 arcsin r.
    EXPECT_NEAR(g.gaps[0].width, 4 * std::asin(r), 2e-2);
    EXPECT_NEAR(g.gaps[0].hi, 2 * std::asin(r), 1e-2);
    EXPECT_NEAR(g.gaps[0].lo, 2 * kPi - 2 * std::asin(r), 1e-2);
  }
}

TEST(ScanCmv, ZeroCoefficientsHaveNoGap) {
  const auto f = SamplingMap::constant(Codomain::Disk, 1, 0.0);
  const auto s = scan_cmv(f, kCircle, circle_grid(5e-2), small_scan());
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NE(s.verdict(i), Verdict::UH) << s.values[i];
  EXPECT_TRUE(gaps(s).gaps.empty());
}

TEST(ScanCmv, RealCoefficientSymmetry) {
  const auto f = SamplingMap::constant(Codomain::Disk, 1, 0.3);
  const auto grid = circle_grid(2 * kPi / 400);
  const auto s = scan_cmv(f, kCircle, grid, small_scan());
  for (std::size_t i = 1; i < s.size(); ++i) {
    EXPECT_EQ(s.verdict(i), s.verdict(s.size() - i)) << s.values[i];
  }
}

TEST(Gaps, RunLengthEndpoints) {
  using V = Verdict;
  const auto g = gaps(fake_scan({V::UH, V::UH, V::NotUH, V::NotUH, V::UH}));
  ASSERT_EQ(g.gaps.size(), 2u);
  EXPECT_EQ(g.gaps[0].lo, 0.0);
  EXPECT_EQ(g.gaps[0].hi, 1.5);
  EXPECT_EQ(g.gaps[1].lo, 3.5);
  EXPECT_EQ(g.gaps[1].hi, 4.0);
  const auto all = gaps(fake_scan({V::UH, V::UH, V::UH}));
  EXPECT_TRUE(all.all_uh);
  ASSERT_EQ(all.gaps.size(), 1u);
  const auto und = gaps(fake_scan({V::UH, V::Undetermined, V::UH}));
  EXPECT_EQ(und.undetermined_count, 1u);
  EXPECT_EQ(und.gaps.size(), 2u);
}

TEST(TruncationJacobi, SmallFreeBlocks) {
  const auto one = SamplingMap::constant(Codomain::Real, 1, 1.0);
  const auto zero = SamplingMap::constant(Codomain::Real, 1, 0.0);
  auto b = SamplingMap(Codomain::Real, 1, 8);
  b.add_fourier(1, 0, 0.5);
  b.add_fourier(-1, 0, 0.5);
  const BasePoint x(0.1);
  const auto t1 = truncation_jacobi(one, b, kCircle, x, 1);
  ASSERT_EQ(t1.values.size(), 1u);
  EXPECT_NEAR(t1.values[0], b.real_value(x), 1e-10);
  const auto t2 = truncation_jacobi(one, zero, kCircle, x, 2);
  EXPECT_NEAR(t2.values[0], -1, 1e-10);
  EXPECT_NEAR(t2.values[1], 1, 1e-10);
  const auto t5 = truncation_jacobi(one, zero, kCircle, x, 5);
  ASSERT_EQ(t5.values.size(), 5u);
  for (int k = 1; k <= 5; ++k) EXPECT_NEAR(t5.values[5 - k], 2 * std::cos(k * kPi / 6), 1e-10);
}

TEST(TruncationJacobi, GershgorinHull) {
  auto a = SamplingMap::constant(Codomain::Real, 1, 1.0);
  a.add_fourier(1, 0, 0.2);
  a.add_fourier(-1, 0, 0.2);
  auto b = SamplingMap(Codomain::Real, 1, 8);
  b.add_fourier(1, 0, 1.0);
  const auto t = truncation_jacobi(a, b, kCircle, BasePoint(0.3), 100);
  EXPECT_EQ(t.values.size(), 100u);
  for (double v : t.values) {
    EXPECT_GE(v, -1 - 2 * 1.4 - 1e-9);
    EXPECT_LE(v, 1 + 2 * 1.4 + 1e-9);
  }
  EXPECT_TRUE(std::is_sorted(t.values.begin(), t.values.end()));
}

TEST(TruncationCmv, FreeCases) {
  const auto zero = SamplingMap::constant(Codomain::Disk, 1, 0.0);
  const auto t1 = truncation_cmv(zero, kCircle, BasePoint(0.0), 1, 0.0);
  ASSERT_EQ(t1.values.size(), 1u);
  EXPECT_NEAR(t1.values[0], 0.0, 1e-10);
  const auto t8 = truncation_cmv(zero, kCircle, BasePoint(0.0), 8, 0.0);
  ASSERT_EQ(t8.values.size(), 8u);
  for (int k = 0; k < 8; ++k) EXPECT_NEAR(t8.values[k], 2 * kPi * k / 8, 1e-10);
}

TEST(TruncationCmv, CountRangeAndInterlacing) {
  auto f = SamplingMap(Codomain::Disk, 1, 8);
  f.add_fourier(1, 0, 0.5);
  const auto a = truncation_cmv(f, kCircle, BasePoint(0.2), 60, 0.0);
  const auto b = truncation_cmv(f, kCircle, BasePoint(0.2), 60, kPi);
  ASSERT_EQ(a.values.size(), 60u);
  ASSERT_EQ(b.values.size(), 60u);
  for (double v : a.values) {
    EXPECT_GE(v, 0.0);
    EXPECT_LT(v, 2 * kPi);
  }
  EXPECT_TRUE(interlace(a.values, b.values));
}

TEST(Consistency, EigenpairsOfCutoffMatrices) {
  const auto one = SamplingMap::constant(Codomain::Real, 1, 1.0);
  SamplingMap b(Codomain::Real, 1, 8);
  b.add_fourier(1, 0, 0.5);
  b.add_fourier(-1, 0, 0.5);
  const auto tj = truncation_jacobi(one, b, kCircle, BasePoint(0.3), 60);
  SamplingMap f(Codomain::Disk, 1, 8);
  f.add_fourier(1, 0, 0.5);
  const auto tc = truncation_cmv(f, kCircle, BasePoint(0.3), 60, 0.4);
  for (std::size_t k = 0; k < 60; k += 3) {
    EXPECT_LE(eigen_residual(tj, k), 1e-8);
    EXPECT_LE(eigen_residual(tc, k), 1e-8);
  }
  // the cut-off matrix is unitary
  const auto c = cmv_cutoff_matrix(tc);
  double worst = 0.0;
  for (std::size_t i = 0; i < 60; ++i)
    for (std::size_t j = 0; j < 60; ++j) {
      cplx acc = 0.0;
      for (std::size_t k = 0; k < 60; ++k) acc += std::conj(c[k * 60 + i]) * c[k * 60 + j];
      worst = std::max(worst, std::abs(acc - (i == j ? 1.0 : 0.0)));
    }
  EXPECT_LE(worst, 1e-13);
}

TEST(Consistency, FreeJacobiHasNoBoundaryStates) {
  const auto one = SamplingMap::constant(Codomain::Real, 1, 1.0);
  const auto zero = SamplingMap::constant(Codomain::Real, 1, 0.0);
  const auto scan = scan_jacobi(one, zero, kCircle, linear_grid(-3.0, 3.0, 1e-3));
  const auto t = truncation_jacobi(one, zero, kCircle, BasePoint(0.0), 200);
  for (double m : boundary_masses(t)) EXPECT_LT(m, kEdgeMassThreshold);
  const auto rep = consistency(scan, {t});
  EXPECT_EQ(rep.edge_states, 0u);
  EXPECT_LE(rep.max_distance_all, 1e-2);
  EXPECT_TRUE(rep.consistent);
}

TEST(Consistency, GapEigenvalueIsReportedAsBoundaryState) {
  // alpha = 0.5 with boundary phase 0 puts an eigenphase at the center of
  // the gap arc |psi| < pi/3.
  const auto f = SamplingMap::constant(Codomain::Disk, 1, 0.5);
  const auto scan = scan_cmv(f, kCircle, circle_grid(1e-3));
  const auto t = truncation_cmv(f, kCircle, BasePoint(0.0), 200, 0.0);
  const auto rep = consistency(scan, {t});
  EXPECT_EQ(rep.edge_states, 1u);
  EXPECT_NEAR(rep.max_distance_all, kPi / 3, 2e-3);
  EXPECT_LE(rep.max_distance_bulk, 1e-2);
  for (const auto& e : rep.eigen) {
    if (e.edge_state) {
      EXPECT_NEAR(e.value, 0.0, 1e-9);
      EXPECT_GT(e.boundary_mass, 0.99);
    }
  }
}

TEST(Consistency, SmallBlocksAreNotClassified) {
  const auto f = SamplingMap::constant(Codomain::Disk, 1, 0.5);
  const auto scan = scan_cmv(f, kCircle, circle_grid(1e-2));
  const auto rep = consistency(scan, {truncation_cmv(f, kCircle, BasePoint(0.0), 10, 0.0)});
  EXPECT_EQ(rep.edge_states, 0u);
  EXPECT_FALSE(rep.consistent);
}
