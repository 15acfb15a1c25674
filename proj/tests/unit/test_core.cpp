#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "helpers.hpp"
#include "mcmt/core/errors.hpp"
#include "mcmt/core/feature.hpp"
#include "mcmt/core/geometry.hpp"

namespace mcmt {
namespace {

using testing::make_box;
using testing::random_feature;
using testing::random_rect;

TEST(CosineDistance, Examples) {
  EXPECT_DOUBLE_EQ(cosine_distance({1, 0}, {1, 0}), 0.0);
  EXPECT_DOUBLE_EQ(cosine_distance({1, 0}, {0, 1}), 1.0);
  EXPECT_NEAR(cosine_distance({1, 0}, {1, 1}), 1.0 - 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(cosine_distance({1, 0}, {-1, 0}), 2.0, 1e-12);
}

TEST(CosineDistance, RejectsBadInput) {
  EXPECT_THROW(cosine_distance({1, 0}, {1, 0, 0}), UsageError);
  EXPECT_THROW(cosine_distance({0, 0}, {1, 0}), UsageError);
  EXPECT_THROW(cosine_distance({}, {}), UsageError);
}

TEST(CosineDistance, SymmetricAndScaleInvariant) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<float> scale(0.01f, 100.0f);
  for (int trial = 0; trial < 500; ++trial) {
    const auto a = random_feature(rng, 1 + trial % 16);
    const auto b = random_feature(rng, a.dim());
    const double ab = cosine_distance(a, b);
    EXPECT_DOUBLE_EQ(ab, cosine_distance(b, a));
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 2.0);
    const float s = scale(rng);
    std::vector<float> scaled(a.values().begin(), a.values().end());
    for (auto& x : scaled) x *= s;
    EXPECT_NEAR(cosine_distance(a, Feature(scaled)), 0.0, 1e-6);
  }
}

TEST(CosineDistance, UnitVariantAgreesOnNormalizedInput) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_feature(rng, 8).normalized();
    const auto b = random_feature(rng, 8).normalized();
    EXPECT_NEAR(unit_cosine_distance(a, b), cosine_distance(a, b), 1e-6);
  }
}

TEST(MeanFeature, IsUnitLengthMean) {
  const std::vector<Feature> fs{{2, 0}, {0, 2}};
  const auto m = mean_feature(fs);
  EXPECT_NEAR(m.norm(), 1.0, 1e-6);
  EXPECT_NEAR(m[0], 1.0 / std::sqrt(2.0), 1e-6);
  EXPECT_NEAR(m[1], 1.0 / std::sqrt(2.0), 1e-6);
}

TEST(Iou, Examples) {
  EXPECT_DOUBLE_EQ(iou({0, 0, 10, 10}, {0, 0, 10, 10}), 1.0);
  EXPECT_DOUBLE_EQ(iou({0, 0, 10, 10}, {20, 20, 5, 5}), 0.0);
  EXPECT_NEAR(iou({0, 0, 10, 10}, {5, 0, 10, 10}), 50.0 / 150.0, 1e-15);
  // touching edges share no area
  EXPECT_DOUBLE_EQ(iou({0, 0, 10, 10}, {10, 0, 10, 10}), 0.0);
}

TEST(Iou, RandomizedProperties) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 2000; ++trial) {
    const Rect a = random_rect(rng);
    const Rect b = random_rect(rng);
    const double v = iou(a, b);
    EXPECT_DOUBLE_EQ(v, iou(b, a));
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
    EXPECT_DOUBLE_EQ(iou(a, a), 1.0);
    // brute-force intersection of the two intervals
    const double ix = std::max(0.0, std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x));
    const double iy = std::max(0.0, std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y));
    EXPECT_NEAR(intersection_area(a, b), ix * iy, 1e-9);
  }
}

TEST(OcclusionRate, Examples) {
  const auto b = make_box(0, {0, 0, 10, 10}, {1, 0}, 0.9, 0);
  EXPECT_DOUBLE_EQ(occlusion_rate(b, {}), 0.0);
  const std::vector<DetBox> same{make_box(0, {0, 0, 10, 10}, {1, 0}, 0.9, 1)};
  EXPECT_DOUBLE_EQ(occlusion_rate(b, same), 1.0);
  const std::vector<DetBox> half{make_box(0, {5, 0, 10, 10}, {1, 0}, 0.9, 1)};
  EXPECT_DOUBLE_EQ(occlusion_rate(b, half), 0.5);
}

TEST(OcclusionRate, SkipsTheBoxItself) {
  const auto b = make_box(3, {0, 0, 10, 10}, {1, 0}, 0.9, 4);
  const std::vector<DetBox> frame{b, make_box(3, {8, 0, 10, 10}, {1, 0}, 0.9, 5)};
  EXPECT_NEAR(occlusion_rate(b, frame), 0.2, 1e-12);
}

TEST(OcclusionRate, UsesMaximalSingleOverlapper) {
  const auto b = make_box(0, {0, 0, 10, 10}, {1, 0}, 0.9, 0);
  const std::vector<DetBox> two{make_box(0, {-5, 0, 10, 10}, {1, 0}, 0.9, 1),
                                make_box(0, {7, 0, 10, 10}, {1, 0}, 0.9, 2)};
  EXPECT_DOUBLE_EQ(occlusion_rate(b, two), 0.5);
}

TEST(OcclusionRate, MonotoneInOccluderGrowth) {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> grow(0.0, 5.0);
  for (int trial = 0; trial < 300; ++trial) {
    const auto b = make_box(0, random_rect(rng), {1, 0}, 0.9, 0);
    Rect o = random_rect(rng);
    double prev = 0.0;
    for (int step = 0; step < 20; ++step) {
      const std::vector<DetBox> others{make_box(0, o, {1, 0}, 0.9, 1)};
      const double r = occlusion_rate(b, others);
      EXPECT_GE(r, prev - 1e-12);
      EXPECT_LE(r, 1.0);
      prev = r;
      const double gx = grow(rng), gy = grow(rng);
      o = {o.x - gx, o.y - gy, o.w + 2 * gx, o.h + 2 * gy};
    }
  }
}

Zone square_zone(double x0, double y0, double size) {
  return {1, {{x0, y0}, {x0 + size, y0}, {x0 + size, y0 + size}, {x0, y0 + size}}, ZoneKind::both};
}

// Box whose bottom-center anchor sits at (ax, ay).
DetBox anchored_at(double ax, double ay) { return make_box(0, {ax - 5, ay - 8, 10, 8}); }

TEST(BoxInZone, Examples) {
  const Zone z = square_zone(0, 0, 100);
  EXPECT_TRUE(box_in_zone(anchored_at(50, 50), z));
  EXPECT_FALSE(box_in_zone(anchored_at(500, 500), z));
  EXPECT_TRUE(box_in_zone(anchored_at(100, 40), z));
  EXPECT_TRUE(box_in_zone(anchored_at(0, 0), z));
}

TEST(BoxInZone, UsesBottomCenterAnchor) {
  const Zone z = square_zone(0, 0, 100);
  // the top of the box is inside, the ground contact point is not
  EXPECT_FALSE(box_in_zone(make_box(0, {40, 90, 10, 20}), z));
  EXPECT_TRUE(box_in_zone(make_box(0, {40, 70, 10, 20}), z));
}

TEST(BoxInZone, InvariantUnderVertexRotation) {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> coord(-20.0, 120.0);
  // a convex and a concave polygon
  const std::vector<std::vector<Point>> polys{
      {{0, 0}, {100, 0}, {100, 60}, {50, 100}, {0, 60}},
      {{0, 0}, {100, 0}, {100, 100}, {50, 40}, {0, 100}},
  };
  for (const auto& poly : polys) {
    for (int trial = 0; trial < 400; ++trial) {
      const auto box = anchored_at(coord(rng), coord(rng));
      const bool expected = box_in_zone(box, {1, poly, ZoneKind::both});
      auto rotated = poly;
      for (std::size_t r = 1; r < poly.size(); ++r) {
        std::rotate(rotated.begin(), rotated.begin() + 1, rotated.end());
        EXPECT_EQ(box_in_zone(box, {1, rotated, ZoneKind::both}), expected);
      }
      auto reversed = poly;
      std::reverse(reversed.begin(), reversed.end());
      EXPECT_EQ(box_in_zone(box, {1, reversed, ZoneKind::both}), expected);
    }
  }
}

TEST(PointInPolygon, ConcaveNotch) {
  const std::vector<Point> poly{{0, 0}, {100, 0}, {100, 100}, {50, 40}, {0, 100}};
  EXPECT_FALSE(point_in_polygon({50, 80}, poly));
  EXPECT_TRUE(point_in_polygon({50, 20}, poly));
  EXPECT_TRUE(point_in_polygon({75, 70}, poly));
}

TEST(PolygonIsSimple, DetectsSelfIntersection) {
  EXPECT_TRUE(polygon_is_simple(square_zone(0, 0, 10).polygon));
  const std::vector<Point> bowtie{{0, 0}, {10, 10}, {10, 0}, {0, 10}};
  EXPECT_FALSE(polygon_is_simple(bowtie));
  const std::vector<Point> two{{0, 0}, {1, 1}};
  EXPECT_FALSE(polygon_is_simple(two));
}

CameraTopology two_cameras() {
  CameraTopology t;
  for (int c = 0; c < 2; ++c) {
    CameraInfo cam;
    cam.id = c;
    cam.zones = {square_zone(0, 0, 100)};
    t.cameras.push_back(cam);
  }
  CameraLink link;
  link.cam_out = 0;
  link.zone_out = 1;
  link.cam_in = 1;
  link.zone_in = 1;
  link.t_out_max = 100;
  link.t_low = 10;
  link.t_upp = 20;
  t.links.push_back(link);
  return t;
}

TEST(CameraTopology, ValidatesLinks) {
  EXPECT_NO_THROW(two_cameras().validate());

  auto missing_camera = two_cameras();
  missing_camera.links[0].cam_in = 7;
  EXPECT_THROW(missing_camera.validate(), ConfigError);

  auto missing_zone = two_cameras();
  missing_zone.links[0].zone_out = 9;
  EXPECT_THROW(missing_zone.validate(), ConfigError);

  auto bad_window = two_cameras();
  bad_window.links[0].t_low = 20;
  EXPECT_THROW(bad_window.validate(), ConfigError);

  auto negative = two_cameras();
  negative.links[0].t_low = -5;
  EXPECT_THROW(negative.validate(), ConfigError);

  auto bowtie = two_cameras();
  bowtie.cameras[0].zones[0].polygon = {{0, 0}, {10, 10}, {10, 0}, {0, 10}};
  EXPECT_THROW(bowtie.validate(), ConfigError);
}

TEST(CameraLink, TravelScaleDefaultsToWindowMidpoint) {
  CameraLink l;
  l.t_low = 10;
  l.t_upp = 30;
  EXPECT_DOUBLE_EQ(l.travel_scale(), 20.0);
  l.beta_t = 4;
  EXPECT_DOUBLE_EQ(l.travel_scale(), 4.0);
}

}  // namespace
}  // namespace mcmt
