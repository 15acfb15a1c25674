#include "mcmt/harness/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "mcmt/core/errors.hpp"
#include "mcmt/core/feature.hpp"
#include "mcmt/core/geometry.hpp"

namespace mcmt::harness {
namespace {

using Rng = std::mt19937_64;
using Vec = std::vector<double>;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
double normal(Rng& rng, double sd) { return sd > 0.0 ? std::normal_distribution<double>(0.0, sd)(rng) : 0.0; }
bool chance(Rng& rng, double p) { return p > 0.0 && uniform(rng, 0.0, 1.0) < p; }

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Vec normalized(Vec v) {
  double n = std::sqrt(dot(v, v));
  for (double& x : v) x /= n;
  return v;
}

Vec random_unit(Rng& rng, int dim) {
  Vec v(dim);
  for (double& x : v) x = normal(rng, 1.0);
  return normalized(std::move(v));
}

Vec axpy(const Vec& a, double s, const Vec& b) {
  Vec r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += s * b[i];
  return r;
}

Feature to_feature(const Vec& v) {
  std::vector<float> f(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) f[i] = static_cast<float>(v[i]);
  return Feature(std::move(f));
}

struct Sample {
  FrameIndex frame = 0;
  Rect truth;
  double score = 0.0;
  bool visible = true;
  bool degraded = false;  // low-score occlusion: appearance unreliable
};

struct Passage {
  int vehicle = 0;  // 0-based, decoys after the real vehicles
  CameraId camera = 0;
  std::vector<Sample> samples;
  int stop_begin = -1;  // sample indices of the stationary episode
  int stop_end = -1;
};

// Box x positions, one per frame. A stop decelerates linearly over `ramp` frames so that it
// comes to rest at stop_x, holds for stop_len frames, then accelerates back.
std::vector<double> positions(double width, double box_w, double speed, double stop_x, int stop_len, int ramp,
                              int* stop_begin, int* stop_end) {
  std::vector<double> xs;
  double brake_x = stop_x - 0.5 * speed * (ramp + 1);
  bool stopped = stop_len <= 0;
  double x = 0.0;
  while (x <= width - box_w) {
    xs.push_back(x);
    if (!stopped && x >= brake_x) {
      for (int k = 1; k <= ramp; ++k) {
        x += speed * (ramp - k + 1) / (ramp + 1);
        xs.push_back(x);
      }
      *stop_begin = static_cast<int>(xs.size());
      for (int k = 0; k < stop_len; ++k) xs.push_back(x);
      *stop_end = static_cast<int>(xs.size()) - 1;
      for (int k = 1; k <= ramp; ++k) {
        x += speed * k / (ramp + 1);
        xs.push_back(x);
      }
      stopped = true;
    }
    x += speed;
  }
  while (!xs.empty() && xs.back() > width - box_w) xs.pop_back();
  return xs;
}

void apply_event(Passage& p, int start, int end, OcclusionMode mode, Rng& rng, const ScenarioConfig& cfg) {
  int n = static_cast<int>(p.samples.size());
  for (int k = std::max(0, start); k <= std::min(end, n - 1); ++k) {
    Sample& s = p.samples[k];
    if (mode == OcclusionMode::drop) {
      s.visible = false;
    } else if (s.visible) {
      s.score = std::min(s.score, uniform(rng, cfg.low_band_min - 0.04, cfg.low_band_min + 0.05));
      s.degraded = true;
    }
  }
}

// Places non-overlapping short occlusions until `budget` frames are degraded.
void random_occlusions(Passage& p, Rng& rng, const ScenarioConfig& cfg) {
  int n = static_cast<int>(p.samples.size());
  int budget = static_cast<int>(std::lround(cfg.occlusion_fraction * n));
  std::vector<char> used(n, 0);
  for (int tries = 0; budget > 0 && tries < 200; ++tries) {
    int len = std::min(budget, uniform_int(rng, cfg.occlusion_span_min, cfg.occlusion_span_max));
    if (n - 4 - len < 2) break;
    int start = uniform_int(rng, 2, n - 2 - len);
    bool free = true;
    for (int k = start - 1; k <= start + len; ++k) free = free && !used[k];
    if (!free) continue;
    for (int k = start; k < start + len; ++k) used[k] = 1;
    apply_event(p, start, start + len - 1,
                chance(rng, cfg.occlusion_drop_share) ? OcclusionMode::drop : OcclusionMode::low_score, rng, cfg);
    budget -= len;
  }
}

std::vector<Zone> corridor_zones(const ScenarioConfig& cfg) {
  double zw = cfg.zone_fraction * cfg.frame_width;
  double w = cfg.frame_width, h = cfg.frame_height;
  return {Zone{1, {{0, 0}, {zw, 0}, {zw, h}, {0, h}}, ZoneKind::entry},
          Zone{2, {{w - zw, 0}, {w, 0}, {w, h}, {w - zw, h}}, ZoneKind::exit}};
}

}  // namespace

void ScenarioConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("scenario: ") + what);
  };
  require(cameras >= 1, "cameras must be >= 1");
  require(vehicles >= 0 && decoys >= 0, "vehicle counts must be >= 0");
  require(feature_dim >= 2, "feature_dim must be >= 2");
  require(feature_noise >= 0.0 && camera_shift >= 0.0 && similar_separation >= 0.0, "noise terms must be >= 0");
  require(2 * similar_pairs <= vehicles && similar_pairs >= 0, "similar_pairs exceeds vehicles");
  require(speed_min > 0.0 && speed_min <= speed_max, "bad speed range");
  require(box_w > 0.0 && box_h > 0.0 && frame_width > 2.0 * box_w, "box does not fit the frame");
  require(size_jitter >= 0.0 && size_jitter < 0.5, "size_jitter must lie in [0, 0.5)");
  require(lanes >= 1 && lane_top >= 0.0, "bad lane layout");
  require(lane_top + (lanes - 1) * lane_spacing + box_h * (1.0 + size_jitter) <= frame_height,
          "lanes do not fit the frame height");
  require(zone_fraction > 0.0 && zone_fraction < 0.4, "zone_fraction must lie in (0, 0.4)");
  require(fps > 0.0, "fps must be > 0");
  require(spawn_gap_min >= 1 && spawn_gap_min <= spawn_gap_max && lead_in >= 0, "bad spawn gaps");
  require(travel_min > 0.0 && travel_max - travel_min >= 5.0, "travel window narrower than 5 frames");
  require(outlier_fraction >= 0.0 && outlier_fraction <= 1.0, "outlier_fraction must lie in [0, 1]");
  require(stop_fraction >= 0.0 && stop_fraction <= 1.0 && stop_min >= 0 && stop_min <= stop_max && stop_ramp >= 0,
          "bad stop model");
  require(stop_position > zone_fraction && stop_position < 1.0 - zone_fraction, "stop must lie mid-scene");
  require(occlusion_fraction >= 0.0 && occlusion_fraction < 0.9, "occlusion_fraction must lie in [0, 0.9)");
  require(occlusion_span_min >= 1 && occlusion_span_min <= occlusion_span_max, "bad occlusion spans");
  require(occlusion_drop_share >= 0.0 && occlusion_drop_share <= 1.0, "bad occlusion_drop_share");
  require(split_fraction >= 0.0 && split_fraction <= 1.0 && split_min >= 1 && split_min <= split_max, "bad split model");
  require(low_conf_onset >= 0 && tail >= 0, "negative frame counts");
  require(score_jitter >= 0.0 && score_mean > 0.0 && score_mean <= 1.0, "bad score model");
  require(low_band_min > 0.05 && low_band_min < low_band_max && low_band_max < 1.0, "bad low-score band");
  require(box_jitter >= 0.0 && occlusion_mixing >= 0.0 && occlusion_mixing <= 1.0, "bad jitter/mixing");
  require(decoys == 0 || cameras >= 2, "decoys need at least two cameras");
  require(decoys == 0 || lead_in + 2 * (decoys - 1) < travel_min, "decoys do not fit before the entering window");
  for (const OcclusionEvent& e : occlusions) {
    require(e.camera >= 0 && e.camera < cameras, "occlusion event camera out of range");
    require(e.vehicle >= 0 && e.vehicle < vehicles, "occlusion event vehicle out of range");
    require(e.start >= 0 && e.start <= e.end, "occlusion event span is empty");
  }
}

Scenario generate_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  const int dim = cfg.feature_dim;
  const int total = cfg.vehicles + cfg.decoys;

  // Base identities, rejection-sampled to keep distinct identities well apart.
  const double min_angle = std::max(0.5, 4.0 * cfg.feature_noise);
  std::vector<Vec> base(cfg.vehicles);
  for (int v = 0; v < cfg.vehicles; ++v) {
    bool twin = v % 2 == 1 && v / 2 < cfg.similar_pairs;
    if (twin) {
      Vec w = random_unit(rng, dim);
      w = normalized(axpy(w, -dot(w, base[v - 1]), base[v - 1]));
      base[v] = normalized(axpy(base[v - 1], cfg.similar_separation, w));
      continue;
    }
    for (int attempt = 0;; ++attempt) {
      if (attempt == 1000) throw ConfigError("scenario: cannot separate identities; lower feature_noise");
      Vec u = random_unit(rng, dim);
      bool ok = true;
      for (int o = 0; o < v && ok; ++o) ok = std::acos(std::clamp(dot(u, base[o]), -1.0, 1.0)) > min_angle;
      if (ok) {
        base[v] = std::move(u);
        break;
      }
    }
  }
  for (int d = 0; d < cfg.decoys; ++d) base.push_back(base[cfg.vehicles > 0 ? d % cfg.vehicles : 0]);
  if (cfg.vehicles == 0)
    for (int d = 0; d < cfg.decoys; ++d) base[d] = random_unit(rng, dim);

  std::vector<double> box_w(total), box_h(total), speed(total);
  std::vector<int> lane(total);
  for (int v = 0; v < total; ++v) {
    box_w[v] = cfg.box_w * (1.0 + uniform(rng, -cfg.size_jitter, cfg.size_jitter));
    box_h[v] = cfg.box_h * (1.0 + uniform(rng, -cfg.size_jitter, cfg.size_jitter));
    speed[v] = uniform(rng, cfg.speed_min, cfg.speed_max);
    lane[v] = (v < cfg.vehicles ? v : v - cfg.vehicles) % cfg.lanes;
  }

  std::vector<Passage> passages;
  auto simulate = [&](int v, CameraId cam, FrameIndex start) {
    Passage p;
    p.vehicle = v;
    p.camera = cam;
    double sp = cfg.speed_per_camera && cam > 0 ? uniform(rng, cfg.speed_min, cfg.speed_max) : speed[v];
    int ln = cfg.shuffle_lanes ? uniform_int(rng, 0, cfg.lanes - 1) : lane[v];
    int stop_len = chance(rng, cfg.stop_fraction) ? uniform_int(rng, cfg.stop_min, cfg.stop_max) : 0;
    double stop_x = cfg.stop_position * cfg.frame_width - 0.5 * box_w[v];
    std::vector<double> xs =
        positions(cfg.frame_width, box_w[v], sp, stop_x, stop_len, cfg.stop_ramp, &p.stop_begin, &p.stop_end);
    double y = cfg.lane_top + ln * cfg.lane_spacing;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      Sample s;
      s.frame = start + static_cast<FrameIndex>(k);
      s.truth = Rect{xs[k], y, box_w[v], box_h[v]};
      s.score = std::clamp(cfg.score_mean + normal(rng, cfg.score_jitter), 0.65, 0.99);
      if (static_cast<int>(k) < cfg.low_conf_onset) s.score = uniform(rng, cfg.low_band_min, cfg.low_band_max);
      p.samples.push_back(s);
    }
    int n = static_cast<int>(p.samples.size());
    if (p.stop_begin >= 0 && cfg.stop_occluded)
      apply_event(p, p.stop_begin + 8, p.stop_end - 3, OcclusionMode::drop, rng, cfg);
    if (chance(rng, cfg.split_fraction)) {
      int len = uniform_int(rng, cfg.split_min, cfg.split_max);
      // keep the split on a moving stretch, clear of both zones
      int lo = static_cast<int>(0.25 * n), hi = static_cast<int>(0.75 * n) - len;
      std::vector<int> starts;
      for (int s = lo; s <= hi; ++s) {
        bool moving = p.stop_begin < 0 || s + len < p.stop_begin - 2 || s > p.stop_end + 2;
        if (moving) starts.push_back(s);
      }
      if (!starts.empty()) {
        int s = starts[uniform_int(rng, 0, static_cast<int>(starts.size()) - 1)];
        apply_event(p, s, s + len - 1, OcclusionMode::drop, rng, cfg);
      }
    }
    if (cfg.occlusion_fraction > 0.0) random_occlusions(p, rng, cfg);
    for (const OcclusionEvent& e : cfg.occlusions)
      if (e.camera == cam && e.vehicle == v) apply_event(p, e.start, e.end, e.mode, rng, cfg);
    return p;
  };

  FrameIndex spawn = cfg.lead_in;
  for (int v = 0; v < cfg.vehicles; ++v) {
    if (v > 0) spawn += uniform_int(rng, cfg.spawn_gap_min, cfg.spawn_gap_max);
    FrameIndex start = spawn;
    for (CameraId cam = 0; cam < cfg.cameras; ++cam) {
      passages.push_back(simulate(v, cam, start));
      FrameIndex exit = passages.back().samples.back().frame;
      int lo = static_cast<int>(std::ceil(cfg.travel_min)) + 2;
      int hi = static_cast<int>(std::floor(cfg.travel_max)) - 2;
      int travel = uniform_int(rng, lo, hi);
      if (chance(rng, cfg.outlier_fraction)) travel = hi + 2 + uniform_int(rng, 5, 20);
      start = exit + travel;
    }
  }
  for (int d = 0; d < cfg.decoys; ++d)
    passages.push_back(simulate(cfg.vehicles + d, cfg.cameras - 1, cfg.lead_in + 2 * d));

  Scenario sc;
  sc.config = cfg;
  FrameIndex last = 0;
  for (const Passage& p : passages) last = std::max(last, p.samples.back().frame);
  sc.frames = last + cfg.tail + 1;

  auto zones = corridor_zones(cfg);
  for (CameraId cam = 0; cam < cfg.cameras; ++cam)
    sc.topology.cameras.push_back(CameraInfo{cam, cfg.frame_width, cfg.frame_height, cfg.fps, zones});
  for (CameraId cam = 0; cam + 1 < cfg.cameras; ++cam) {
    CameraLink link;
    link.cam_out = cam;
    link.zone_out = 2;
    link.cam_in = cam + 1;
    link.zone_in = 1;
    link.t_low = cfg.travel_min;
    link.t_upp = cfg.travel_max;
    link.t_out_max = sc.frames - static_cast<FrameIndex>(std::ceil(cfg.travel_min));
    link.t_in_min = static_cast<FrameIndex>(std::floor(cfg.travel_min));
    sc.topology.links.push_back(link);
  }
  for (int d = 0; d < cfg.decoys; ++d) sc.decoy_ids.push_back(cfg.vehicles + d + 1);

  // Per-(vehicle, camera) appearance offsets, drawn in a fixed order.
  std::map<std::pair<int, CameraId>, Vec> shift;
  for (const Passage& p : passages) shift[{p.vehicle, p.camera}] = random_unit(rng, dim);

  const double noise_sd = cfg.feature_noise / std::sqrt(static_cast<double>(dim));
  for (CameraId cam = 0; cam < cfg.cameras; ++cam) {
    // frame -> indices of (passage, sample)
    std::map<FrameIndex, std::vector<std::pair<int, int>>> by_frame;
    for (int pi = 0; pi < static_cast<int>(passages.size()); ++pi) {
      if (passages[pi].camera != cam) continue;
      for (int k = 0; k < static_cast<int>(passages[pi].samples.size()); ++k)
        by_frame[passages[pi].samples[k].frame].push_back({pi, k});
    }
    scmt::FrameList frames(sc.frames);
    std::vector<GtBox> gt;
    for (auto& [frame, members] : by_frame) {
      std::vector<DetBox> dets;
      std::vector<Vec> clean(members.size());
      for (std::size_t m = 0; m < members.size(); ++m) {
        const Passage& p = passages[members[m].first];
        Vec u = axpy(base[p.vehicle], cfg.camera_shift, shift[{p.vehicle, cam}]);
        for (double& x : u) x += normal(rng, noise_sd);
        clean[m] = normalized(std::move(u));
      }
      for (std::size_t m = 0; m < members.size(); ++m) {
        Passage& p = passages[members[m].first];
        Sample& s = p.samples[members[m].second];
        // the box with the lower bottom edge is in front
        double overlap = 0.0;
        int occluder = -1;
        for (std::size_t o = 0; o < members.size(); ++o) {
          if (o == m) continue;
          const Sample& other = passages[members[o].first].samples[members[o].second];
          bool front = other.truth.bottom() > s.truth.bottom() ||
                       (other.truth.bottom() == s.truth.bottom() && o < m);
          if (!front) continue;
          double r = intersection_area(s.truth, other.truth) / s.truth.area();
          if (r > overlap) {
            overlap = r;
            occluder = static_cast<int>(o);
          }
        }
        bool visible = s.visible && overlap < 0.85;
        gt.push_back(GtBox{frame, p.vehicle + 1, s.truth, visible});
        if (!visible) continue;
        Vec f = clean[m];
        if (s.degraded) {
          for (double& x : f) x += normal(rng, 2.0 * noise_sd);
          f = normalized(std::move(f));
        }
        double score = s.score;
        if (occluder >= 0) {
          double mix = cfg.occlusion_mixing * overlap;
          for (std::size_t i = 0; i < f.size(); ++i) f[i] = (1.0 - mix) * f[i] + mix * clean[occluder][i];
          f = normalized(std::move(f));
          score *= 1.0 - 0.5 * overlap;
        }
        DetBox d;
        d.frame = frame;
        d.rect = s.truth;
        d.rect.x += normal(rng, cfg.box_jitter);
        d.rect.y += normal(rng, cfg.box_jitter);
        d.rect.w = std::max(1.0, d.rect.w + normal(rng, 0.5 * cfg.box_jitter));
        d.rect.h = std::max(1.0, d.rect.h + normal(rng, 0.5 * cfg.box_jitter));
        d.score = score;
        d.feature = to_feature(f);
        dets.push_back(std::move(d));
      }
      std::shuffle(dets.begin(), dets.end(), rng);
      for (std::size_t i = 0; i < dets.size(); ++i) dets[i].det_id = static_cast<int>(i);
      frames[frame] = std::move(dets);
    }
    std::sort(gt.begin(), gt.end(), [](const GtBox& a, const GtBox& b) {
      return std::pair(a.frame, a.id) < std::pair(b.frame, b.id);
    });
    sc.detections[cam] = std::move(frames);
    sc.ground_truth[cam] = std::move(gt);
  }
  return sc;
}

ScenarioConfig preset(const std::string& name, std::uint64_t seed) {
  ScenarioConfig c;
  c.seed = seed;
  if (name == "corridor") return c;
  if (name == "noisy") {
    c.feature_noise = 0.15;
    c.occlusion_fraction = 0.3;
    return c;
  }
  if (name == "stop_and_go") {
    c.vehicles = 6;
    c.cameras = 1;
    c.feature_noise = 0.1;
    c.stop_fraction = 0.5;
    c.split_fraction = 0.5;
    c.low_conf_onset = 10;
    c.occlusion_fraction = 0.05;
    return c;
  }
  if (name == "similar") {
    // two look-alikes whose identity gap barely exceeds the per-box noise, passing close by
    c.vehicles = 2;
    c.cameras = 2;
    c.similar_pairs = 1;
    c.feature_noise = 0.2;
    c.similar_separation = 0.25;
    c.camera_shift = 0.1;
    c.speed_per_camera = true;
    c.speed_min = 6.0;
    c.speed_max = 18.0;
    c.lanes = 2;
    c.lane_spacing = 24.0;
    c.shuffle_lanes = true;
    c.spawn_gap_min = 2;
    c.spawn_gap_max = 6;
    c.occlusion_fraction = 0.2;
    c.occlusion_drop_share = 0.0;
    return c;
  }
  throw UsageError("unknown preset: " + name);
}

std::vector<std::string> preset_names() { return {"corridor", "noisy", "stop_and_go", "similar"}; }

eval::Sequence gt_sequence(const std::map<CameraId, std::vector<GtBox>>& gt, bool cross_camera_only,
                           bool per_camera_ids) {
  std::map<int, std::set<CameraId>> seen;
  for (const auto& [cam, boxes] : gt)
    for (const GtBox& b : boxes) seen[b.id].insert(cam);
  eval::Sequence seq;
  for (const auto& [cam, boxes] : gt)
    for (const GtBox& b : boxes) {
      if (cross_camera_only && seen[b.id].size() < 2) continue;
      int id = per_camera_ids ? camera_scoped_id(cam, b.id) : b.id;
      seq.add(cam, b.frame, eval::Observation{id, b.rect, b.visible});
    }
  return seq;
}

}  // namespace mcmt::harness
