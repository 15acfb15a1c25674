#pragma once

#include <span>
#include <vector>

#include "mcmt/core/types.hpp"
#include "mcmt/scmt/config.hpp"

namespace mcmt::scmt {

// True when `p` is neither within the border margin of the frame nor inside any zone.
bool in_scene_middle(const Point& p, const CameraInfo& camera, double border_margin);

// Mean of the first / last `window` box features (unit length).
Feature head_feature(const Tracklet& t, int window);
Feature tail_feature(const Tracklet& t, int window);

struct RelinkCandidate {
  std::size_t ended = 0;    // index of the tracklet that stops mid-scene
  std::size_t started = 0;  // index of the tracklet that starts mid-scene
  double distance = 0.0;
};

// All (ended, started) pairs that pass the temporal, spatial and appearance gates.
std::vector<RelinkCandidate> relink_candidates(std::span<const Tracklet> tracks,
                                               const CameraInfo& camera,
                                               const TrackerConfig& cfg);

// Greedy re-linking of broken trajectories by appearance, repeated to a fixpoint.
// Merged tracklets keep the id of the earlier segment. Output is sorted by track id.
std::vector<Tracklet> relink(std::vector<Tracklet> tracks, const TrackerConfig& cfg,
                             const CameraInfo& camera);

}  // namespace mcmt::scmt
