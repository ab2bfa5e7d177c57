// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "vsa/error.hpp"
#include "vsa/geometry.hpp"
#include "vsa/random.hpp"

namespace vsa {
namespace {

TEST(IouTest, IdenticalBoxes) {
  const BoundingBox a{0, 0, 10, 10};
  EXPECT_DOUBLE_EQ(iou(a, a), 1.0);
}

TEST(IouTest, DisjointBoxes) { EXPECT_DOUBLE_EQ(iou(BoundingBox{0, 0, 10, 10}, BoundingBox{20, 20, 30, 30}), 0.0); }

TEST(IouTest, HalfOverlapMatchesRaster) {
  const BoundingBox a{0, 0, 10, 10};
  const BoundingBox b{5, 0, 15, 10};
  EXPECT_NEAR(iou(a, b), oracle::raster_iou(a, b, 0.1), 1e-12);
  EXPECT_NEAR(iou(a, b), 1.0 / 3.0, 1e-12);
}

TEST(IouTest, DegenerateBoxesGiveZero) {
  const BoundingBox p{3, 3, 3, 3};
  EXPECT_EQ(iou(p, p), 0.0);
  EXPECT_EQ(iou(p, BoundingBox{0, 0, 10, 10}), 0.0);
}

TEST(IouTest, FloatScalar) {
  const Box<float> a{0, 0, 10, 10};
  const Box<float> b{5, 0, 15, 10};
  EXPECT_NEAR(iou(a, b), 1.0f / 3.0f, 1e-6f);
}

TEST(IouTest, RandomPairsAgreeWithRasterOracle) {
  Rng rng(11);
  auto coord = [&] { return static_cast<double>(rng.below(400)) / 10.0; };
  auto box = [&] {
    double x0 = coord(), x1 = coord(), y0 = coord(), y1 = coord();
    if (x0 > x1) std::swap(x0, x1);
    if (y0 > y1) std::swap(y0, y1);
    return BoundingBox{x0, y0, x1, y1};
  };
  for (int i = 0; i < 1000; ++i) {
    const auto a = box();
    const auto b = box();
    const double v = iou(a, b);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
    EXPECT_EQ(v, iou(b, a));
    EXPECT_NEAR(v, oracle::raster_iou(a, b, 0.1), 1e-3) << i;
    if (a.area() > 0) EXPECT_DOUBLE_EQ(iou(a, a), 1.0);
  }
}

TEST(ClipTest, ClampsToFrame) {
  const FrameMeta f{"s", 0, 0, 100, 100};
  EXPECT_EQ(clip(BoundingBox{-5, -5, 5, 5}, f), (BoundingBox{0, 0, 5, 5}));
  EXPECT_EQ(clip(BoundingBox{0, 0, 10, 10}, f), (BoundingBox{0, 0, 10, 10}));
  EXPECT_EQ(clip(BoundingBox{90, 90, 200, 200}, f), (BoundingBox{90, 90, 100, 100}));
  EXPECT_TRUE(clip(BoundingBox{150, 150, 200, 200}, f).valid());
}

TEST(DetectionTest, ValidateRejectsBadValues) {
  EXPECT_NO_THROW(validate(Detection{0, {0, 0, 1, 1}, "person", 0.5}));
  EXPECT_THROW(validate(Detection{0, {0, 0, 1, 1}, "person", 1.5}), DomainError);
  EXPECT_THROW(validate(Detection{0, {0, 0, 1, 1}, "", 0.5}), DomainError);
  EXPECT_THROW(validate(Detection{0, {2, 0, 1, 1}, "person", 0.5}), DomainError);
}

TEST(RngTest, ReproducibleStreams) {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    EXPECT_NE(x, c());
  }
}

TEST(RngTest, KnownSplitMixOutput) {
  // First output of SplitMix64 seeded with 0.
  SplitMix64 sm(0);
  EXPECT_EQ(sm(), 0xE220A8397B1DCDAFULL);
}

TEST(RngTest, UniformMomentsAndBelowRange) {
  Rng rng(5);
  double sum = 0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    ASSERT_LT(rng.below(7), 7u);
  }
  EXPECT_NEAR(sum / 100000, 0.5, 0.01);
}

TEST(RngTest, DerivedSeedsDifferByStage) {
  EXPECT_NE(derive_seed(1, "synthetic"), derive_seed(1, "augment"));
  EXPECT_EQ(derive_seed(1, "synthetic"), derive_seed(1, "synthetic"));
}

}  // namespace
}  // namespace vsa
