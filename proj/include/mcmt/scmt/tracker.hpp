#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mcmt/core/types.hpp"
#include "mcmt/motion/kalman.hpp"
#include "mcmt/scmt/config.hpp"

namespace mcmt::scmt {

// Per-frame detections; element i holds the boxes of frame i.
using FrameList = std::vector<std::vector<DetBox>>;

enum class TrackState { active, lost, finished };

struct Track {
  Tracklet tracklet;
  motion::MotionState motion;
  TrackState state = TrackState::active;
  int lost_frames = 0;
  bool matched_this_frame = false;

  // stationary bookkeeping
  bool stationary = false;
  std::optional<DetBox> stationary_best;  // highest-score box of the current stationary episode
  int held_frames = 0;

  TrackId id() const { return tracklet.track_id; }
  const DetBox& last_box() const { return tracklet.boxes.back(); }
  // Last box backed by a real detection.
  const DetBox& last_observed() const;
};

struct TrackSet {
  std::vector<Track> active;
  std::vector<Track> lost;
  std::vector<Track> finished;
  TrackId next_id = 1;
  FrameIndex last_frame = -1;
  CameraId camera_id = 0;

  std::size_t live_count() const { return active.size() + lost.size(); }
};

// Weighted appearance + normalized motion cost; kForbidden when the motion gate rejects.
double frame_cost(const Track& t, const DetBox& d, const TrackerConfig& cfg);

// Motion-only cost used by the low-score stage.
double motion_cost(const Track& t, const DetBox& d, const TrackerConfig& cfg);

// One BYTE-style step for `frame`. Detections must all carry `frame`, which must be larger
// than every frame processed before.
TrackSet associate_frame(TrackSet ts, std::span<const DetBox> dets, FrameIndex frame,
                         const TrackerConfig& cfg);

// Stationary handling for tracks left unmatched by associate_frame() in this frame.
TrackSet ssa_adjust(TrackSet ts, std::span<const DetBox> dets, FrameIndex frame,
                    const TrackerConfig& cfg);

// True when the track's recent observed centers stay within eps * min(w, h).
bool is_stationary(const Tracklet& t, const TrackerConfig& cfg);

// Moves every live track to `finished` and drops trailing held boxes.
TrackSet close_all(TrackSet ts);

// Runs associate_frame (+ ssa_adjust when enabled) over a whole frame list.
std::vector<Tracklet> track_forward(const FrameList& frames, CameraId camera,
                                    const TrackerConfig& cfg);

}  // namespace mcmt::scmt
