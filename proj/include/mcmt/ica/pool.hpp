#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mcmt/core/types.hpp"

namespace mcmt::ica {

// Zone passages of one tracklet: the zone its last in-zone box belongs to and when it left
// it, and the zone its first in-zone box belongs to and when it entered it.
struct ZoneTimes {
  std::optional<FrameIndex> t_out;  // last frame inside zone_out
  std::optional<FrameIndex> t_in;   // first frame inside zone_in
};

// t_out is set when the last box that lies in any zone lies in `zone_out`, t_in when the
// first box that lies in any zone lies in `zone_in`.
ZoneTimes zone_times(const Tracklet& t, const CameraInfo& camera, int zone_out, int zone_in);

struct PoolPair {
  CameraLink link;
  std::vector<Tracklet> exiting;
  std::vector<FrameIndex> t_out;
  std::vector<Tracklet> entering;
  std::vector<FrameIndex> t_in;

  std::size_t exiting_boxes() const;
  std::size_t entering_boxes() const;
  // Travel time of (exiting i, entering j).
  double travel_time(std::size_t i, std::size_t j) const { return double(t_in[j] - t_out[i]); }
};

// Exiting pool: last zone is link.zone_out and t_out < link.t_out_max. Entering pool: first
// zone is link.zone_in and t_in > link.t_in_min. Both pools are sorted by track id.
// Throws ConfigError when the link's zones do not exist on the given cameras.
PoolPair build_pool(std::span<const Tracklet> cam_out_tracks, const CameraInfo& cam_out,
                    std::span<const Tracklet> cam_in_tracks, const CameraInfo& cam_in,
                    const CameraLink& link);

}  // namespace mcmt::ica
