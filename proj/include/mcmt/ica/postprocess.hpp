#pragma once

#include <map>
#include <optional>
#include <vector>

#include "mcmt/core/types.hpp"

namespace mcmt::ica {

struct TrackletKey {
  CameraId camera = 0;
  TrackId track = 0;
  auto operator<=>(const TrackletKey&) const = default;
};

struct CrossPair {
  TrackletKey exiting;
  TrackletKey entering;
  FrameIndex t_out = 0;
  FrameIndex t_in = 0;
  double score = 0.0;
};

struct GlobalAssignment {
  std::vector<CrossPair> pairs;  // pairs that survived the temporal check
  std::map<TrackletKey, int> global_ids;

  std::optional<int> global_id(const TrackletKey& k) const {
    const auto it = global_ids.find(k);
    if (it == global_ids.end()) return std::nullopt;
    return it->second;
  }
};

// Drops pairs whose entering time is not after the exiting time, unions the rest and
// numbers the components densely from 1 in order of their smallest key. With
// `all_tracklets` non-empty and `include_single_camera` set, unmatched tracklets get their
// own ids as well.
GlobalAssignment postprocess(const std::vector<CrossPair>& pairs,
                             const std::vector<TrackletKey>& all_tracklets = {},
                             bool include_single_camera = false);

}  // namespace mcmt::ica
