#include "mcmt/ica/pool.hpp"

#include <algorithm>
#include <string>

#include "mcmt/core/errors.hpp"
#include "mcmt/core/geometry.hpp"

namespace mcmt::ica {

namespace {

bool in_any_zone(const DetBox& b, const CameraInfo& camera) {
  for (const auto& z : camera.zones)
    if (box_in_zone(b, z)) return true;
  return false;
}

const Zone& require_zone(const CameraInfo& camera, int zone_id) {
  const Zone* z = camera.find_zone(zone_id);
  if (!z)
    throw ConfigError("camera " + std::to_string(camera.id) + " has no zone " +
                      std::to_string(zone_id));
  return *z;
}

}  // namespace

ZoneTimes zone_times(const Tracklet& t, const CameraInfo& camera, int zone_out, int zone_in) {
  ZoneTimes out;
  const Zone* zo = camera.find_zone(zone_out);
  const Zone* zi = camera.find_zone(zone_in);
  if (zo) {
    for (auto it = t.boxes.rbegin(); it != t.boxes.rend(); ++it) {
      if (!in_any_zone(*it, camera)) continue;
      if (box_in_zone(*it, *zo)) out.t_out = it->frame;
      break;
    }
  }
  if (zi) {
    for (const auto& b : t.boxes) {
      if (!in_any_zone(b, camera)) continue;
      if (box_in_zone(b, *zi)) out.t_in = b.frame;
      break;
    }
  }
  return out;
}

std::size_t PoolPair::exiting_boxes() const {
  std::size_t n = 0;
  for (const auto& t : exiting) n += t.length();
  return n;
}

std::size_t PoolPair::entering_boxes() const {
  std::size_t n = 0;
  for (const auto& t : entering) n += t.length();
  return n;
}

PoolPair build_pool(std::span<const Tracklet> cam_out_tracks, const CameraInfo& cam_out,
                    std::span<const Tracklet> cam_in_tracks, const CameraInfo& cam_in,
                    const CameraLink& link) {
  require_zone(cam_out, link.zone_out);
  require_zone(cam_in, link.zone_in);

  PoolPair pool;
  pool.link = link;
  std::vector<std::pair<Tracklet, FrameIndex>> ex, en;
  for (const auto& t : cam_out_tracks) {
    if (t.boxes.empty()) continue;
    const auto zt = zone_times(t, cam_out, link.zone_out, link.zone_out);
    if (zt.t_out && *zt.t_out < link.t_out_max) ex.emplace_back(t, *zt.t_out);
  }
  for (const auto& t : cam_in_tracks) {
    if (t.boxes.empty()) continue;
    const auto zt = zone_times(t, cam_in, link.zone_in, link.zone_in);
    if (zt.t_in && *zt.t_in > link.t_in_min) en.emplace_back(t, *zt.t_in);
  }
  const auto by_id = [](const auto& a, const auto& b) { return a.first.track_id < b.first.track_id; };
  std::sort(ex.begin(), ex.end(), by_id);
  std::sort(en.begin(), en.end(), by_id);
  for (auto& [t, time] : ex) {
    pool.exiting.push_back(std::move(t));
    pool.t_out.push_back(time);
  }
  for (auto& [t, time] : en) {
    pool.entering.push_back(std::move(t));
    pool.t_in.push_back(time);
  }
  return pool;
}

}  // namespace mcmt::ica
