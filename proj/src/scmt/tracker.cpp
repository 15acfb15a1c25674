#include "mcmt/scmt/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Core>

#include "mcmt/assign/hungarian.hpp"
#include "mcmt/core/errors.hpp"
#include "mcmt/core/feature.hpp"
#include "mcmt/core/geometry.hpp"

namespace mcmt::scmt {

namespace {

motion::KalmanConfig kalman_for(const TrackerConfig& cfg) {
  motion::KalmanConfig k = cfg.kalman;
  // the smoothed distance is part of the stationary handling
  if (!cfg.use_ssa) k.smoothing = 0.0;
  return k;
}

Feature ema_update(const Feature& ema, const Feature& obs, double momentum) {
  return blend(ema, momentum, obs.normalized(), 1.0 - momentum).normalized();
}

Track start_track(const DetBox& d, TrackId id, CameraId camera, const TrackerConfig& cfg) {
  Track t;
  t.tracklet.track_id = id;
  t.tracklet.camera_id = camera;
  t.tracklet.boxes.push_back(d);
  t.tracklet.ema_feature = d.feature.normalized();
  t.motion = motion::initiate(d.rect, kalman_for(cfg));
  t.matched_this_frame = true;
  return t;
}

void apply_match(Track& t, const DetBox& d, const TrackerConfig& cfg) {
  t.motion = motion::update(t.motion, d, kalman_for(cfg));
  t.tracklet.boxes.push_back(d);
  t.tracklet.ema_feature = ema_update(t.tracklet.ema_feature, d.feature, cfg.ema_momentum);
  t.state = TrackState::active;
  t.lost_frames = 0;
  t.matched_this_frame = true;
}

void trim_held_tail(Track& t) {
  auto& b = t.tracklet.boxes;
  while (b.size() > 1 && b.back().interp) b.pop_back();
}

std::vector<std::size_t> order_by_det_id(std::span<const DetBox> dets) {
  std::vector<std::size_t> idx(dets.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return dets[a].det_id < dets[b].det_id; });
  return idx;
}

std::vector<Track> take_live(TrackSet& ts) {
  std::vector<Track> live;
  live.reserve(ts.live_count());
  for (auto& t : ts.active) live.push_back(std::move(t));
  for (auto& t : ts.lost) live.push_back(std::move(t));
  ts.active.clear();
  ts.lost.clear();
  std::sort(live.begin(), live.end(), [](const Track& a, const Track& b) { return a.id() < b.id(); });
  return live;
}

void put_back(TrackSet& ts, std::vector<Track>& live) {
  std::sort(live.begin(), live.end(), [](const Track& a, const Track& b) { return a.id() < b.id(); });
  for (auto& t : live) {
    switch (t.state) {
      case TrackState::active: ts.active.push_back(std::move(t)); break;
      case TrackState::lost: ts.lost.push_back(std::move(t)); break;
      case TrackState::finished:
        trim_held_tail(t);
        ts.finished.push_back(std::move(t));
        break;
    }
  }
}

}  // namespace

const DetBox& Track::last_observed() const {
  for (auto it = tracklet.boxes.rbegin(); it != tracklet.boxes.rend(); ++it)
    if (!it->interp) return *it;
  return tracklet.boxes.front();
}

double frame_cost(const Track& t, const DetBox& d, const TrackerConfig& cfg) {
  const auto k = kalman_for(cfg);
  const double m = motion::mahalanobis(t.motion, d, k);
  if (m > k.gate_threshold) return kForbidden;
  const double a = cosine_distance(t.tracklet.ema_feature, d.feature);
  return cfg.appearance_weight * a + (1.0 - cfg.appearance_weight) * (m / k.gate_threshold);
}

double motion_cost(const Track& t, const DetBox& d, const TrackerConfig& cfg) {
  const auto k = kalman_for(cfg);
  const double m = motion::mahalanobis(t.motion, d, k);
  if (m > k.gate_threshold) return kForbidden;
  return m / k.gate_threshold;
}

TrackSet associate_frame(TrackSet ts, std::span<const DetBox> dets, FrameIndex frame,
                         const TrackerConfig& cfg) {
  if (frame <= ts.last_frame)
    throw UsageError("frame " + std::to_string(frame) + " is not after last processed frame " +
                     std::to_string(ts.last_frame));
  for (const auto& d : dets) {
    if (d.frame != frame) throw UsageError("detection frame does not match the processed frame");
    if (!d.rect.valid() || !std::isfinite(d.score)) throw UsageError("invalid detection box");
  }
  const int steps = ts.last_frame < 0 ? 1 : frame - ts.last_frame;
  ts.last_frame = frame;
  const auto kcfg = kalman_for(cfg);

  std::vector<Track> live = take_live(ts);
  std::vector<char> was_active(live.size());
  for (std::size_t i = 0; i < live.size(); ++i) {
    was_active[i] = live[i].state == TrackState::active;
    live[i].matched_this_frame = false;
    for (int s = 0; s < steps; ++s) live[i].motion = motion::predict(live[i].motion, kcfg);
  }

  std::vector<std::size_t> high, low;
  for (std::size_t i : order_by_det_id(dets)) {
    if (dets[i].score > cfg.high_score)
      high.push_back(i);
    else if (dets[i].score > cfg.low_score)
      low.push_back(i);
  }

  std::vector<char> track_used(live.size(), 0);
  std::vector<char> high_used(high.size(), 0);

  // Stage 1: high-score detections against every live track.
  if (!live.empty() && !high.empty()) {
    Eigen::MatrixXd cost(live.size(), high.size());
    for (std::size_t r = 0; r < live.size(); ++r) {
      for (std::size_t c = 0; c < high.size(); ++c) {
        const DetBox& d = dets[high[c]];
        const double app = cosine_distance(live[r].tracklet.ema_feature, d.feature);
        cost(r, c) = app > cfg.appearance_reject ? kForbidden : frame_cost(live[r], d, cfg);
      }
    }
    for (const auto& a : solve_assignment(cost)) {
      apply_match(live[a.row], dets[high[a.col]], cfg);
      track_used[a.row] = 1;
      high_used[a.col] = 1;
    }
  }

  // Stage 2: low-score detections against tracks that were tracked in the previous frame.
  std::vector<std::size_t> rest;
  for (std::size_t r = 0; r < live.size(); ++r)
    if (!track_used[r] && was_active[r]) rest.push_back(r);
  if (!rest.empty() && !low.empty()) {
    Eigen::MatrixXd cost(rest.size(), low.size());
    for (std::size_t r = 0; r < rest.size(); ++r)
      for (std::size_t c = 0; c < low.size(); ++c)
        cost(r, c) = motion_cost(live[rest[r]], dets[low[c]], cfg);
    for (const auto& a : solve_assignment(cost)) {
      apply_match(live[rest[a.row]], dets[low[a.col]], cfg);
      track_used[rest[a.row]] = 1;
    }
  }

  for (std::size_t r = 0; r < live.size(); ++r) {
    if (track_used[r]) continue;
    Track& t = live[r];
    t.lost_frames = t.state == TrackState::active ? 1 : t.lost_frames + 1;
    t.state = t.lost_frames > cfg.max_lost ? TrackState::finished : TrackState::lost;
  }

  for (std::size_t c = 0; c < high.size(); ++c)
    if (!high_used[c]) live.push_back(start_track(dets[high[c]], ts.next_id++, ts.camera_id, cfg));

  put_back(ts, live);
  return ts;
}

bool is_stationary(const Tracklet& t, const TrackerConfig& cfg) {
  const DetBox* last = nullptr;
  for (auto it = t.boxes.rbegin(); it != t.boxes.rend(); ++it)
    if (!it->interp) {
      last = &*it;
      break;
    }
  if (!last) return false;
  const Point c0 = last->rect.center();
  const double tol = cfg.stationary_eps * std::min(last->rect.w, last->rect.h);
  const FrameIndex from = last->frame - cfg.stationary_window + 1;
  int count = 0;
  FrameIndex earliest = last->frame;
  for (auto it = t.boxes.rbegin(); it != t.boxes.rend() && it->frame >= from; ++it) {
    if (it->interp) continue;
    const Point c = it->rect.center();
    if (std::hypot(c.x - c0.x, c.y - c0.y) >= tol) return false;
    ++count;
    earliest = it->frame;
  }
  // the window must actually be covered, not just a couple of fresh boxes
  return count >= std::max(2, cfg.stationary_window / 2) &&
         last->frame - earliest >= cfg.stationary_window / 2;
}

TrackSet ssa_adjust(TrackSet ts, std::span<const DetBox> /*dets*/, FrameIndex frame,
                    const TrackerConfig& cfg) {
  std::vector<Track> live = take_live(ts);
  for (auto& t : live) {
    t.stationary = is_stationary(t.tracklet, cfg);
    if (!t.matched_this_frame) continue;
    if (t.stationary) {
      const DetBox& d = t.last_box();
      if (!t.stationary_best || d.score > t.stationary_best->score) t.stationary_best = d;
    } else {
      t.stationary_best.reset();
    }
    t.held_frames = 0;
  }

  for (std::size_t i = 0; i < live.size(); ++i) {
    Track& t = live[i];
    if (t.matched_this_frame || !t.stationary || !t.stationary_best) continue;
    if (t.held_frames >= cfg.stationary_max_hold) continue;
    const Rect& here = t.last_box().rect;
    bool neighbours_still = true;
    for (std::size_t j = 0; j < live.size() && neighbours_still; ++j) {
      if (j == i) continue;
      if (iou(here, live[j].last_box().rect) > 0.0 && !live[j].stationary) neighbours_still = false;
    }
    if (!neighbours_still) continue;

    const DetBox& best = *t.stationary_best;
    t.motion.mean.head<4>() = motion::to_measurement(best.rect);
    t.motion.mean.tail<4>().setZero();
    DetBox held = best;
    held.frame = frame;
    held.det_id = -1;
    held.interp = true;
    t.tracklet.boxes.push_back(std::move(held));
    t.state = TrackState::active;
    t.lost_frames = 0;
    ++t.held_frames;
  }
  put_back(ts, live);
  return ts;
}

TrackSet close_all(TrackSet ts) {
  std::vector<Track> live = take_live(ts);
  for (auto& t : live) t.state = TrackState::finished;
  put_back(ts, live);
  std::sort(ts.finished.begin(), ts.finished.end(),
            [](const Track& a, const Track& b) { return a.id() < b.id(); });
  return ts;
}

std::vector<Tracklet> track_forward(const FrameList& frames, CameraId camera,
                                    const TrackerConfig& cfg) {
  TrackSet ts;
  ts.camera_id = camera;
  for (std::size_t f = 0; f < frames.size(); ++f) {
    ts = associate_frame(std::move(ts), frames[f], FrameIndex(f), cfg);
    if (cfg.use_ssa) ts = ssa_adjust(std::move(ts), frames[f], FrameIndex(f), cfg);
  }
  ts = close_all(std::move(ts));
  std::vector<Tracklet> out;
  out.reserve(ts.finished.size());
  for (auto& t : ts.finished) out.push_back(std::move(t.tracklet));
  return out;
}

}  // namespace mcmt::scmt
