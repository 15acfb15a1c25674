#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "mcmt/core/types.hpp"

namespace mcmt::testing {

inline DetBox make_box(FrameIndex frame, Rect rect, Feature feature = {1.0f, 0.0f},
                       double score = 0.9, int det_id = 0) {
  DetBox b;
  b.frame = frame;
  b.rect = rect;
  b.score = score;
  b.feature = std::move(feature);
  b.det_id = det_id;
  return b;
}

inline Tracklet make_tracklet(TrackId id, CameraId camera, std::vector<DetBox> boxes) {
  Tracklet t;
  t.track_id = id;
  t.camera_id = camera;
  t.boxes = std::move(boxes);
  t.ema_feature = t.boxes.empty() ? Feature{} : t.boxes.front().feature;
  return t;
}

inline Feature random_feature(std::mt19937& rng, std::size_t dim) {
  std::normal_distribution<float> n(0.0f, 1.0f);
  std::vector<float> v(dim);
  for (;;) {
    double sq = 0.0;
    for (auto& x : v) {
      x = n(rng);
      sq += double(x) * x;
    }
    if (sq > 1e-6) return Feature(v);
  }
}

// Unit vector at `angle` radians in the first two dimensions of a `dim`-d space.
inline Feature planar_feature(double angle, std::size_t dim = 2) {
  std::vector<float> v(dim, 0.0f);
  v[0] = float(std::cos(angle));
  v[1] = float(std::sin(angle));
  return Feature(v);
}

inline Rect random_rect(std::mt19937& rng, double extent = 100.0) {
  std::uniform_real_distribution<double> pos(0.0, extent);
  std::uniform_real_distribution<double> size(1.0, extent / 2);
  return {pos(rng), pos(rng), size(rng), size(rng)};
}

// Constant-velocity run of one 60x45 object: boxes at frames [first, first + count).
// Fresh tracks start at rest, so keep vx below ~0.3 box heights per frame.
inline std::vector<DetBox> straight_run(FrameIndex first, int count, double x0, double y, double vx,
                                        const Feature& f, double score = 0.9) {
  std::vector<DetBox> out;
  for (int i = 0; i < count; ++i)
    out.push_back(make_box(first + i, {x0 + vx * i, y, 60.0, 45.0}, f, score, 0));
  return out;
}

}  // namespace mcmt::testing
