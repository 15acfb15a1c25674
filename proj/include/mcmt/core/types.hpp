#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mcmt {

using CameraId = int;
using TrackId = int;
using FrameIndex = int;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Axis-aligned box in pixels, top-left anchored.
struct Rect {
  double x = 0.0;
  double y = 0.0;
  double w = 1.0;
  double h = 1.0;

  double area() const { return w * h; }
  double right() const { return x + w; }
  double bottom() const { return y + h; }
  Point center() const { return {x + 0.5 * w, y + 0.5 * h}; }
  // Ground contact point of a vehicle box; used for zone membership.
  Point anchor() const { return {x + 0.5 * w, y + h}; }
  bool valid() const;

  friend bool operator==(const Rect&, const Rect&) = default;
};

// Appearance embedding. Stored exactly as delivered by the extractor (not normalized).
class Feature {
 public:
  Feature() = default;
  explicit Feature(std::vector<float> values) : values_(std::move(values)) {}
  Feature(std::initializer_list<float> values) : values_(values) {}

  std::size_t dim() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  std::span<const float> values() const { return values_; }
  float operator[](std::size_t i) const { return values_[i]; }
  double norm() const;
  Feature normalized() const;
  bool finite() const;

  friend bool operator==(const Feature&, const Feature&) = default;

 private:
  std::vector<float> values_;
};

struct DetBox {
  FrameIndex frame = 0;
  Rect rect;
  double score = 1.0;
  Feature feature;
  int det_id = 0;
  // Set on boxes emitted while a stationary track was held without a detection.
  bool interp = false;
  // Occlusion rate against co-temporal boxes; filled in before inter-camera matching.
  double occlusion = 0.0;
};

struct Tracklet {
  TrackId track_id = 0;
  CameraId camera_id = 0;
  std::vector<DetBox> boxes;
  Feature ema_feature;

  std::size_t length() const { return boxes.size(); }
  FrameIndex first_frame() const { return boxes.front().frame; }
  FrameIndex last_frame() const { return boxes.back().frame; }
};

enum class ZoneKind { entry, exit, both };

struct Zone {
  int zone_id = 0;
  std::vector<Point> polygon;
  ZoneKind kind = ZoneKind::both;
};

struct CameraInfo {
  CameraId id = 0;
  double width = 1920.0;
  double height = 1080.0;
  double fps = 10.0;
  std::vector<Zone> zones;

  const Zone* find_zone(int zone_id) const;
};

// Directed (exit-zone -> entry-zone) connection between two cameras. All times are
// frame indices on the shared clock.
struct CameraLink {
  CameraId cam_out = 0;
  int zone_out = 0;
  CameraId cam_in = 0;
  int zone_in = 0;
  FrameIndex t_out_max = 0;  // exiting tracklets need t_out < t_out_max
  FrameIndex t_in_min = 0;   // entering tracklets need t_in > t_in_min
  double t_low = 0.0;
  double t_upp = 0.0;
  // Scale of the travel-time penalty exponent; <= 0 means "use the window midpoint".
  double beta_t = 0.0;

  double travel_scale() const { return beta_t > 0.0 ? beta_t : 0.5 * (t_low + t_upp); }
};

struct CameraTopology {
  std::vector<CameraInfo> cameras;
  std::vector<CameraLink> links;

  const CameraInfo* find_camera(CameraId id) const;
  // Throws ConfigError when a link references a missing camera/zone or has a bad window.
  void validate() const;
};

}  // namespace mcmt
