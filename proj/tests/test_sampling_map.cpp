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

#include <cstdio>
#include <filesystem>

#include "uhlab/sampling_map.hpp"

using namespace uhlab;

namespace {

SamplingMap mixed_map(int dims) {
  SamplingMap m(Codomain::Disk, dims, 8);
  m.add_fourier(1, dims == 2 ? -2 : 0, cplx(0.1, -0.2));
  m.add_fourier(0, 0, cplx(1.0 / 3.0, 0.0));
  m.set_grid(3, dims == 2 ? 5 : 0, cplx(0.01, 0.02));
  m.set_grid(7, 0, cplx(-1e-17, 0.0));
  return m;
}

}  // namespace

TEST(SamplingMap, TextRoundTripIsExact) {
  for (int dims : {1, 2}) {
    const SamplingMap m = mixed_map(dims);
    const SamplingMap back = SamplingMap::from_text(m.to_text());
    EXPECT_TRUE(back == m);
    EXPECT_EQ(back.to_text(), m.to_text());
  }
}

TEST(SamplingMap, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "uhlab_map_roundtrip.txt";
  const SamplingMap m = mixed_map(2);
  m.write_file(path.string());
  EXPECT_TRUE(SamplingMap::read_file(path.string()) == m);
  std::filesystem::remove(path);
}

TEST(SamplingMap, GridInterpolatesBetweenLatticePoints) {
  SamplingMap m(Codomain::Real, 1, 4);
  m.set_grid(1, 0, 1.0);
  EXPECT_DOUBLE_EQ(m.real_value(BasePoint(0.25)), 1.0);
  EXPECT_DOUBLE_EQ(m.real_value(BasePoint(0.125)), 0.5);
  EXPECT_DOUBLE_EQ(m.real_value(BasePoint(0.5)), 0.0);
  SamplingMap w(Codomain::Real, 1, 4);
  w.set_grid(0, 0, 1.0);
  EXPECT_DOUBLE_EQ(w.real_value(BasePoint(0.875)), 0.5);
}

TEST(SamplingMap, RealCodomainDropsImaginaryPart) {
  SamplingMap m(Codomain::Real, 1, 8);
  m.add_fourier(1, 0, 0.5);
  m.add_fourier(-1, 0, 0.5);
  EXPECT_NEAR(m.real_value(BasePoint(0.0)), 1.0, 1e-15);
  EXPECT_EQ(m(BasePoint(0.1)).imag(), 0.0);
}

TEST(SamplingMap, ParseErrors) {
  const char* bad[] = {
      "",
      "codomain=disk dims=1\n",
      "codomain=foo dims=1 resolution=4\n",
      "codomain=real dims=1 resolution=4\nfourier 1 0.5\n",
      "codomain=real dims=1 resolution=4\ngrid 4 1.0\n",
      "codomain=real dims=1 resolution=4\ngrid 1 x\n",
      "codomain=real dims=1 resolution=4\nbump 1 2\n",
  };
  for (const char* text : bad) {
    try {
      SamplingMap::from_text(text);
      FAIL() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::ParseError) << text;
    }
  }
  EXPECT_NO_THROW(SamplingMap::from_text("# comment\ncodomain=real dims=1 resolution=4\n\nfourier 0 1 0\n"));
}
