#include "mcmt/scmt/relink.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "mcmt/core/feature.hpp"
#include "mcmt/core/geometry.hpp"

namespace mcmt::scmt {

namespace {

Feature window_mean(const Tracklet& t, int window, bool from_tail) {
  const std::size_t n = std::min<std::size_t>(std::size_t(window), t.boxes.size());
  std::vector<Feature> fs;
  fs.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    fs.push_back(t.boxes[from_tail ? t.boxes.size() - 1 - i : i].feature);
  return mean_feature(fs);
}

// Pixel velocity of the box center over the last `window` boxes.
Point tail_velocity(const Tracklet& t, int window) {
  const std::size_t n = std::min<std::size_t>(std::size_t(window), t.boxes.size());
  if (n < 2) return {0.0, 0.0};
  const DetBox& a = t.boxes[t.boxes.size() - n];
  const DetBox& b = t.boxes.back();
  const double dt = b.frame - a.frame;
  if (dt <= 0) return {0.0, 0.0};
  const Point ca = a.rect.center(), cb = b.rect.center();
  return {(cb.x - ca.x) / dt, (cb.y - ca.y) / dt};
}

}  // namespace

bool in_scene_middle(const Point& p, const CameraInfo& camera, double border_margin) {
  const double mx = border_margin * camera.width;
  const double my = border_margin * camera.height;
  if (p.x < mx || p.x > camera.width - mx || p.y < my || p.y > camera.height - my) return false;
  for (const auto& z : camera.zones)
    if (point_in_polygon(p, z.polygon)) return false;
  return true;
}

Feature head_feature(const Tracklet& t, int window) { return window_mean(t, window, false); }
Feature tail_feature(const Tracklet& t, int window) { return window_mean(t, window, true); }

std::vector<RelinkCandidate> relink_candidates(std::span<const Tracklet> tracks,
                                               const CameraInfo& camera,
                                               const TrackerConfig& cfg) {
  std::vector<RelinkCandidate> out;
  std::vector<char> ends_mid(tracks.size()), starts_mid(tracks.size());
  std::vector<Feature> heads(tracks.size()), tails(tracks.size());
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    ends_mid[i] = in_scene_middle(tracks[i].boxes.back().rect.anchor(), camera, cfg.border_margin);
    starts_mid[i] =
        in_scene_middle(tracks[i].boxes.front().rect.anchor(), camera, cfg.border_margin);
    if (ends_mid[i]) tails[i] = tail_feature(tracks[i], cfg.relink_feature_window);
    if (starts_mid[i]) heads[i] = head_feature(tracks[i], cfg.relink_feature_window);
  }
  for (std::size_t e = 0; e < tracks.size(); ++e) {
    if (!ends_mid[e]) continue;
    const Tracklet& ended = tracks[e];
    const Point v = tail_velocity(ended, cfg.relink_feature_window);
    for (std::size_t s = 0; s < tracks.size(); ++s) {
      if (s == e || !starts_mid[s]) continue;
      const Tracklet& started = tracks[s];
      const int gap = started.first_frame() - ended.last_frame();
      if (gap <= 0 || gap > cfg.relink_max_gap) continue;
      const Point from = ended.boxes.back().rect.center();
      const Point predicted{from.x + v.x * gap, from.y + v.y * gap};
      const Rect& head = started.boxes.front().rect;
      const Point to = head.center();
      const double reach = cfg.relink_spatial_gate * std::hypot(head.w, head.h);
      if (std::hypot(predicted.x - to.x, predicted.y - to.y) > reach) continue;
      const double d = unit_cosine_distance(tails[e], heads[s]);
      if (d <= cfg.relink_threshold) out.push_back({e, s, d});
    }
  }
  std::sort(out.begin(), out.end(), [&](const RelinkCandidate& a, const RelinkCandidate& b) {
    return std::tie(a.distance, tracks[a.ended].track_id, tracks[a.started].track_id) <
           std::tie(b.distance, tracks[b.ended].track_id, tracks[b.started].track_id);
  });
  return out;
}

std::vector<Tracklet> relink(std::vector<Tracklet> tracks, const TrackerConfig& cfg,
                             const CameraInfo& camera) {
  std::sort(tracks.begin(), tracks.end(),
            [](const Tracklet& a, const Tracklet& b) { return a.track_id < b.track_id; });
  for (;;) {
    const auto candidates = relink_candidates(tracks, camera, cfg);
    if (candidates.empty()) break;
    std::vector<char> touched(tracks.size(), 0), absorbed(tracks.size(), 0);
    for (const auto& c : candidates) {
      if (touched[c.ended] || touched[c.started]) continue;
      touched[c.ended] = touched[c.started] = 1;
      absorbed[c.started] = 1;
      Tracklet& head = tracks[c.ended];
      Tracklet& rest = tracks[c.started];
      head.boxes.insert(head.boxes.end(), std::make_move_iterator(rest.boxes.begin()),
                        std::make_move_iterator(rest.boxes.end()));
      head.ema_feature = rest.ema_feature;
    }
    std::vector<Tracklet> next;
    next.reserve(tracks.size());
    for (std::size_t i = 0; i < tracks.size(); ++i)
      if (!absorbed[i]) next.push_back(std::move(tracks[i]));
    tracks = std::move(next);
    std::sort(tracks.begin(), tracks.end(),
              [](const Tracklet& a, const Tracklet& b) { return a.track_id < b.track_id; });
  }
  return tracks;
}

}  // namespace mcmt::scmt
