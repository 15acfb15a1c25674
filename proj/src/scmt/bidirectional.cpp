#include "mcmt/scmt/bidirectional.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

#include "mcmt/core/geometry.hpp"
#include "mcmt/scmt/relink.hpp"

namespace mcmt::scmt {

std::vector<Tracklet> track_backward(const FrameList& frames, CameraId camera,
                                     const TrackerConfig& cfg) {
  const FrameIndex last = FrameIndex(frames.size()) - 1;
  FrameList reversed(frames.size());
  for (std::size_t f = 0; f < frames.size(); ++f) {
    auto& dst = reversed[std::size_t(last) - f];
    dst = frames[f];
    for (auto& d : dst) d.frame = last - d.frame;
  }
  auto tracks = track_forward(reversed, camera, cfg);
  for (auto& t : tracks) {
    for (auto& b : t.boxes) b.frame = last - b.frame;
    std::reverse(t.boxes.begin(), t.boxes.end());
  }
  return tracks;
}

std::vector<Tracklet> merge_bidirectional(std::vector<Tracklet> forward,
                                          const std::vector<Tracklet>& backward,
                                          const TrackerConfig& cfg) {
  // (frame, det_id) of every detection already owned by a forward tracklet
  std::set<std::pair<FrameIndex, int>> owned;
  std::vector<std::map<FrameIndex, const DetBox*>> by_frame(forward.size());
  for (std::size_t i = 0; i < forward.size(); ++i)
    for (const auto& b : forward[i].boxes) {
      if (!b.interp) owned.insert({b.frame, b.det_id});
      by_frame[i][b.frame] = &b;
    }

  std::vector<std::vector<DetBox>> additions(forward.size());
  for (const auto& back : backward) {
    std::size_t best = forward.size();
    int best_votes = 0;
    for (std::size_t i = 0; i < forward.size(); ++i) {
      if (back.last_frame() < forward[i].first_frame() || back.first_frame() > forward[i].last_frame())
        continue;
      int votes = 0;
      for (const auto& b : back.boxes) {
        const auto it = by_frame[i].find(b.frame);
        if (it != by_frame[i].end() && iou(it->second->rect, b.rect) >= cfg.bidirectional_iou) ++votes;
      }
      if (votes > best_votes) {
        best_votes = votes;
        best = i;
      }
    }
    if (best == forward.size()) continue;
    const FrameIndex lo = forward[best].first_frame();
    const FrameIndex hi = forward[best].last_frame();
    for (const auto& b : back.boxes) {
      if (b.interp || (b.frame >= lo && b.frame <= hi)) continue;
      if (!owned.insert({b.frame, b.det_id}).second) continue;
      additions[best].push_back(b);
    }
  }

  for (std::size_t i = 0; i < forward.size(); ++i) {
    if (additions[i].empty()) continue;
    auto& boxes = forward[i].boxes;
    boxes.insert(boxes.end(), additions[i].begin(), additions[i].end());
    std::stable_sort(boxes.begin(), boxes.end(),
                     [](const DetBox& a, const DetBox& b) { return a.frame < b.frame; });
    boxes.erase(std::unique(boxes.begin(), boxes.end(),
                            [](const DetBox& a, const DetBox& b) { return a.frame == b.frame; }),
                boxes.end());
  }
  return forward;
}

std::vector<Tracklet> track_bidirectional(const FrameList& frames, CameraId camera,
                                          const TrackerConfig& cfg) {
  if (frames.empty()) return {};
  auto forward = track_forward(frames, camera, cfg);
  const auto backward = track_backward(frames, camera, cfg);
  return merge_bidirectional(std::move(forward), backward, cfg);
}

std::vector<Tracklet> track_camera(const FrameList& frames, const CameraInfo& camera,
                                   const TrackerConfig& cfg) {
  cfg.validate();
  auto tracks = cfg.use_bt ? track_bidirectional(frames, camera.id, cfg)
                           : track_forward(frames, camera.id, cfg);
  if (cfg.use_trl) tracks = relink(std::move(tracks), cfg, camera);
  std::sort(tracks.begin(), tracks.end(),
            [](const Tracklet& a, const Tracklet& b) { return a.track_id < b.track_id; });
  return tracks;
}

}  // namespace mcmt::scmt
