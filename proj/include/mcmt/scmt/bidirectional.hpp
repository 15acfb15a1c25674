#pragma once

#include <vector>

#include "mcmt/scmt/tracker.hpp"

namespace mcmt::scmt {

// Runs the tracker on the time-reversed sequence. Returned boxes carry original frame indices.
std::vector<Tracklet> track_backward(const FrameList& frames, CameraId camera,
                                     const TrackerConfig& cfg);

// Extends forward tracklets with the boxes their best-overlapping backward tracklet found
// outside the forward span. Backward tracklets with no overlapping forward tracklet are dropped.
std::vector<Tracklet> merge_bidirectional(std::vector<Tracklet> forward,
                                          const std::vector<Tracklet>& backward,
                                          const TrackerConfig& cfg);

std::vector<Tracklet> track_bidirectional(const FrameList& frames, CameraId camera,
                                          const TrackerConfig& cfg);

// Full single-camera pipeline: forward or bidirectional tracking, then re-linking, each
// according to the strategy flags in `cfg`.
std::vector<Tracklet> track_camera(const FrameList& frames, const CameraInfo& camera,
                                   const TrackerConfig& cfg);

}  // namespace mcmt::scmt
