#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "oracle.hpp"
#include "lggrad/shape.hpp"

using namespace lggrad;
using lggrad::testing::LevelFixture;
using lggrad::testing::random_fixture;

namespace {

Roi roi_of(const LevelFixture& f) {
  const auto [img, mask] = lggrad::testing::to_volumes(f);
  return extract_roi(img, mask, 1);
}

LevelFixture block(std::size_t nx, std::size_t ny, std::size_t nz, Spacing s = {1, 1, 1}) {
  return {{nx, ny, nz}, s, std::vector<int>(nx * ny * nz, 1)};
}

}  // namespace

TEST(Shape3d, SingleVoxel) {
  const auto f = shape3d_features(make_shape_geometry(roi_of(block(1, 1, 1))));
  const double expected = std::cbrt(std::numbers::pi) * std::pow(6.0, 2.0 / 3.0) / 6.0;
  EXPECT_DOUBLE_EQ(f.at("VoxelVolume"), 1.0);
  EXPECT_DOUBLE_EQ(f.at("SurfaceArea"), 6.0);
  EXPECT_NEAR(f.at("Sphericity"), 0.80600, 5e-6);
  EXPECT_NEAR(f.at("Sphericity"), expected, 1e-12);
  EXPECT_EQ(f.at("Elongation"), 0.0);
  EXPECT_EQ(f.at("Flatness"), 0.0);
  EXPECT_EQ(f.at("Maximum3DDiameter"), 0.0);
}

TEST(Shape3d, Block) {
  const auto f = shape3d_features(make_shape_geometry(roi_of(block(2, 2, 2))));
  EXPECT_DOUBLE_EQ(f.at("VoxelVolume"), 8.0);
  EXPECT_DOUBLE_EQ(f.at("SurfaceArea"), 24.0);
  EXPECT_DOUBLE_EQ(f.at("SurfaceVolumeRatio"), 3.0);
  EXPECT_DOUBLE_EQ(f.at("Maximum3DDiameter"), std::sqrt(3.0));
  EXPECT_DOUBLE_EQ(f.at("Maximum2DDiameterSlice"), std::sqrt(2.0));
  // Cube: covariance 0.25 I, so every axis is 4 * 0.5.
  EXPECT_NEAR(f.at("MajorAxisLength"), 2.0, 1e-12);
  EXPECT_NEAR(f.at("LeastAxisLength"), 2.0, 1e-12);
  EXPECT_NEAR(f.at("Elongation"), 1.0, 1e-12);
  EXPECT_EQ(f.values.size(), 16u);
}

TEST(Shape3d, AnisotropicSpacing) {
  const auto f = shape3d_features(make_shape_geometry(roi_of(block(3, 1, 1, {0.5, 2.0, 4.0}))));
  EXPECT_DOUBLE_EQ(f.at("VoxelVolume"), 3 * 4.0);
  // faces normal to x: 2 of area 8; normal to y: 6 of area 2; normal to z: 6 of area 1
  EXPECT_DOUBLE_EQ(f.at("SurfaceArea"), 2 * 8.0 + 6 * 2.0 + 6 * 1.0);
  EXPECT_DOUBLE_EQ(f.at("Maximum3DDiameter"), 1.0);
}

TEST(Shape3d, SphericalDisproportionIsReciprocal) {
  const auto f = shape3d_features(make_shape_geometry(roi_of(block(3, 2, 2))));
  EXPECT_EQ(f.at("SphericalDisproportion"), 1.0 / f.at("Sphericity"));
}

TEST(Shape2d, SinglePixel) {
  const auto f = shape2d_features(make_shape_geometry(roi_of(block(1, 1, 1))));
  EXPECT_DOUBLE_EQ(f.at("PixelSurface"), 1.0);
  EXPECT_DOUBLE_EQ(f.at("Perimeter"), 4.0);
  EXPECT_NEAR(f.at("Sphericity2D"), 0.8862, 5e-5);
  EXPECT_DOUBLE_EQ(f.at("Sphericity2D"), std::sqrt(std::numbers::pi) / 2.0);
}

TEST(Shape2d, Square) {
  const auto f = shape2d_features(make_shape_geometry(roi_of(block(2, 2, 1))));
  EXPECT_DOUBLE_EQ(f.at("PixelSurface"), 4.0);
  EXPECT_DOUBLE_EQ(f.at("Perimeter"), 8.0);
  EXPECT_NEAR(f.at("EffectiveDiameter"), 2.2568, 5e-5);
  EXPECT_DOUBLE_EQ(f.at("EffectiveDiameter"), 2.0 * std::sqrt(4.0 / std::numbers::pi));
  EXPECT_DOUBLE_EQ(f.at("MaximumDiameter"), std::sqrt(2.0));
  EXPECT_EQ(f.values.size(), 10u);
}

TEST(Shape2d, UsesLargestSliceLowestOnTies) {
  LevelFixture f{{3, 3, 3}, {1, 1, 1}, std::vector<int>(27, 0)};
  f.levels[0 + 9 * 0] = 1;                      // k=0: 1 pixel
  for (int n = 0; n < 4; ++n) f.levels[9 * 1 + n] = 1;  // k=1: 4 pixels
  for (int n = 5; n < 9; ++n) f.levels[9 * 2 + n] = 1;  // k=2: 4 pixels
  const auto geom = make_shape_geometry(roi_of(f));
  EXPECT_EQ(geom.axial_slice, 1);
  EXPECT_DOUBLE_EQ(shape2d_features(geom).at("PixelSurface"), 4.0);
}

TEST(Shape, PrincipalMomentsOfLine) {
  const auto m = principal_moments({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}});
  EXPECT_NEAR(m[0], 2.0 / 3.0, 1e-12);
  EXPECT_EQ(m[1], 0.0);
  EXPECT_EQ(m[2], 0.0);
}

// Isotropic spacing scale s: volume s^3, area s^2, lengths s, ratios fixed.
TEST(Shape, ScalingProperty) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    auto fixture = random_fixture(seed, {6, 6, 4}, 1);
    const double s = 0.5 + 0.37 * static_cast<double>(seed % 7);
    auto scaled = fixture;
    scaled.spacing = {s, s, s};
    const auto base = make_shape_geometry(roi_of(fixture));
    const auto big = make_shape_geometry(roi_of(scaled));
    const auto a3 = shape3d_features(base), b3 = shape3d_features(big);
    const auto a2 = shape2d_features(base), b2 = shape2d_features(big);

    auto near = [](double got, double want) {
      return std::abs(got - want) <= 1e-9 * std::max(1.0, std::abs(want));
    };
    ASSERT_TRUE(near(b3.at("VoxelVolume"), a3.at("VoxelVolume") * s * s * s));
    ASSERT_TRUE(near(b3.at("SurfaceArea"), a3.at("SurfaceArea") * s * s));
    for (auto name : {"Maximum3DDiameter", "Maximum2DDiameterSlice", "Maximum2DDiameterColumn",
                      "Maximum2DDiameterRow", "MajorAxisLength", "MinorAxisLength",
                      "LeastAxisLength"}) {
      ASSERT_TRUE(near(b3.at(name), a3.at(name) * s)) << name << " seed " << seed;
    }
    for (auto name : {"Sphericity", "Compactness1", "Compactness2", "SphericalDisproportion",
                      "Elongation", "Flatness"}) {
      ASSERT_TRUE(near(b3.at(name), a3.at(name))) << name << " seed " << seed;
    }
    ASSERT_TRUE(near(b2.at("PixelSurface"), a2.at("PixelSurface") * s * s));
    ASSERT_TRUE(near(b2.at("Perimeter"), a2.at("Perimeter") * s));
    ASSERT_TRUE(near(b2.at("Sphericity2D"), a2.at("Sphericity2D")));

    const double sph = a3.at("Sphericity");
    ASSERT_GT(sph, 0.0);
    ASSERT_LE(sph, 1.0);
    ASSERT_LE(a3.at("Flatness"), a3.at("Elongation") + 1e-12);
    ASSERT_LE(a3.at("Elongation"), 1.0 + 1e-12);
  }
}

// Exposed faces against a direct count over the six face neighbors.
TEST(Shape, SurfaceMatchesFaceCount) {
  for (std::uint64_t seed = 100; seed < 160; ++seed) {
    const auto fixture = random_fixture(seed, {5, 5, 3}, 1);
    const auto roi = roi_of(fixture);
    std::set<Index3> in(roi.coords.begin(), roi.coords.end());
    double faces = 0.0;
    for (const auto& c : roi.coords) {
      for (int axis = 0; axis < 3; ++axis) {
        for (int sign : {-1, 1}) {
          auto n = c;
          n[axis] += sign;
          if (!in.count(n)) faces += 1.0;
        }
      }
    }
    const auto f = shape3d_features(make_shape_geometry(roi));
    ASSERT_DOUBLE_EQ(f.at("SurfaceArea"), faces);
  }
}
