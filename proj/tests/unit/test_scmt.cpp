#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "helpers.hpp"
#include "mcmt/assign/hungarian.hpp"
#include "mcmt/core/errors.hpp"
#include "mcmt/core/feature.hpp"
#include "mcmt/core/geometry.hpp"
#include "mcmt/scmt/bidirectional.hpp"
#include "mcmt/scmt/relink.hpp"
#include "mcmt/scmt/tracker.hpp"

namespace mcmt::scmt {
namespace {

using testing::make_box;
using testing::make_tracklet;
using testing::planar_feature;
using testing::straight_run;

CameraInfo test_camera() {
  CameraInfo cam;
  cam.id = 0;
  cam.width = 1000;
  cam.height = 600;
  cam.zones = {{1, {{0, 0}, {100, 0}, {100, 600}, {0, 600}}, ZoneKind::entry},
               {2, {{900, 0}, {1000, 0}, {1000, 600}, {900, 600}}, ZoneKind::exit}};
  return cam;
}

FrameList frames_of(const std::vector<std::vector<DetBox>>& objects, int count) {
  FrameList frames(count);
  for (const auto& obj : objects)
    for (const auto& b : obj)
      if (b.frame < count) frames[b.frame].push_back(b);
  for (auto& f : frames)
    for (std::size_t i = 0; i < f.size(); ++i) f[i].det_id = int(i);
  return frames;
}

std::vector<const Track*> live_tracks(const TrackSet& ts) {
  std::vector<const Track*> out;
  for (const auto& t : ts.active) out.push_back(&t);
  for (const auto& t : ts.lost) out.push_back(&t);
  return out;
}

TrackerConfig no_strategies() {
  TrackerConfig cfg;
  cfg.use_ssa = cfg.use_trl = cfg.use_bt = false;
  return cfg;
}

// ---------------------------------------------------------------- frame_cost

Track single_track(const DetBox& d, const TrackerConfig& cfg) {
  TrackSet ts;
  const std::vector<DetBox> dets{d};
  ts = associate_frame(std::move(ts), dets, d.frame, cfg);
  return ts.active.at(0);
}

TEST(FrameCost, IdenticalFeatureAtPredictedPositionIsZero) {
  TrackerConfig cfg = no_strategies();
  cfg.appearance_weight = 1.0;
  const Track t = single_track(make_box(0, {100, 100, 40, 30}), cfg);
  EXPECT_NEAR(frame_cost(t, make_box(1, {100, 100, 40, 30}), cfg), 0.0, 1e-7);
}

TEST(FrameCost, GatedPairIsForbidden) {
  const TrackerConfig cfg = no_strategies();
  const Track t = single_track(make_box(0, {100, 100, 40, 30}), cfg);
  EXPECT_EQ(frame_cost(t, make_box(1, {600, 100, 40, 30}), cfg), kForbidden);
  EXPECT_EQ(motion_cost(t, make_box(1, {600, 100, 40, 30}), cfg), kForbidden);
}

TEST(FrameCost, WeightedSumOfTermsHandBuilt) {
  TrackerConfig cfg = no_strategies();
  cfg.appearance_weight = 0.5;
  const double h = 50.0, score = 0.9;
  const Track t = single_track(make_box(0, {100, 100, 50, h}, {1, 0}, score), cfg);
  // Fresh track: P_xx = (2 h / 20)^2, R_xx = (1 - score) (h / 20)^2, no smoothing without SSA.
  const double s_xx = std::pow(2 * h / 20, 2) + (1 - score) * std::pow(h / 20, 2);
  const double gate = cfg.kalman.gate_threshold;
  const double dx = std::sqrt(0.4 * gate * s_xx);
  // cos = 0.8 gives an appearance term of 0.2
  Track unpredicted = t;
  const double cost = frame_cost(unpredicted, make_box(0, {100 + dx, 100, 50, h}, {0.8f, 0.6f}, score), cfg);
  EXPECT_NEAR(cost, 0.3, 1e-6);
}

// ---------------------------------------------------------------- associate_frame

TEST(AssociateFrame, EmptyDetectionsLoseEveryTrack) {
  const TrackerConfig cfg = no_strategies();
  TrackSet ts;
  const std::vector<DetBox> first{make_box(0, {100, 100, 40, 30}, {1, 0}, 0.9, 0),
                                  make_box(0, {400, 100, 40, 30}, {0, 1}, 0.9, 1)};
  ts = associate_frame(std::move(ts), first, 0, cfg);
  ASSERT_EQ(ts.active.size(), 2u);
  ts = associate_frame(std::move(ts), {}, 1, cfg);
  EXPECT_TRUE(ts.active.empty());
  ASSERT_EQ(ts.lost.size(), 2u);
  for (const auto& t : ts.lost) EXPECT_EQ(t.lost_frames, 1);
  EXPECT_EQ(ts.next_id, 3);
}

TEST(AssociateFrame, LostBeyondMaxLostFinishes) {
  TrackerConfig cfg = no_strategies();
  cfg.max_lost = 3;
  TrackSet ts;
  const std::vector<DetBox> first{make_box(0, {100, 100, 40, 30})};
  ts = associate_frame(std::move(ts), first, 0, cfg);
  for (int f = 1; f <= 3; ++f) ts = associate_frame(std::move(ts), {}, f, cfg);
  EXPECT_EQ(ts.lost.size(), 1u);
  ts = associate_frame(std::move(ts), {}, 4, cfg);
  EXPECT_TRUE(ts.lost.empty());
  EXPECT_EQ(ts.finished.size(), 1u);
}

TEST(AssociateFrame, CoLocatedDetectionExtendsTrack) {
  const TrackerConfig cfg = no_strategies();
  TrackSet ts;
  const std::vector<DetBox> a{make_box(0, {100, 100, 40, 30})};
  const std::vector<DetBox> b{make_box(1, {101, 100, 40, 30})};
  ts = associate_frame(std::move(ts), a, 0, cfg);
  ts = associate_frame(std::move(ts), b, 1, cfg);
  ASSERT_EQ(ts.active.size(), 1u);
  EXPECT_EQ(ts.active[0].tracklet.length(), 2u);
  EXPECT_EQ(ts.next_id, 2);
}

TEST(AssociateFrame, RejectsNonIncreasingFrame) {
  const TrackerConfig cfg = no_strategies();
  TrackSet ts;
  ts = associate_frame(std::move(ts), {}, 5, cfg);
  EXPECT_THROW(associate_frame(ts, {}, 5, cfg), UsageError);
  EXPECT_THROW(associate_frame(ts, {}, 2, cfg), UsageError);
  const std::vector<DetBox> wrong{make_box(3, {0, 0, 10, 10})};
  EXPECT_THROW(associate_frame(ts, wrong, 6, cfg), UsageError);
}

TEST(AssociateFrame, EmaFeatureFollowsMomentum) {
  TrackerConfig cfg = no_strategies();
  cfg.ema_momentum = 0.9;
  TrackSet ts;
  const std::vector<DetBox> a{make_box(0, {100, 100, 40, 30}, {1, 0})};
  const std::vector<DetBox> b{make_box(1, {100, 100, 40, 30}, {0.96f, 0.28f})};
  ts = associate_frame(std::move(ts), a, 0, cfg);
  ts = associate_frame(std::move(ts), b, 1, cfg);
  const Feature& ema = ts.active.at(0).tracklet.ema_feature;
  const double x = 0.9 + 0.1 * 0.96, y = 0.1 * 0.28, n = std::hypot(x, y);
  EXPECT_NEAR(ema[0], x / n, 1e-6);
  EXPECT_NEAR(ema[1], y / n, 1e-6);
}

TEST(AssociateFrame, ThreeByThreeMatchesBruteForce) {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> jitter(-4.0, 4.0);
  std::uniform_real_distribution<double> angle(-0.15, 0.15);
  const TrackerConfig cfg = no_strategies();
  for (int trial = 0; trial < 200; ++trial) {
    // three tracks close together so several assignments are gate-feasible
    std::vector<DetBox> seed;
    for (int i = 0; i < 3; ++i)
      seed.push_back(make_box(0, {200.0 + 12 * i, 200, 40, 30}, planar_feature(0.25 * i, 3), 0.9, i));
    TrackSet ts;
    ts = associate_frame(std::move(ts), seed, 0, cfg);
    std::vector<DetBox> dets;
    for (int i = 0; i < 3; ++i)
      dets.push_back(make_box(1, {200.0 + 12 * i + jitter(rng), 200 + jitter(rng), 40, 30},
                              planar_feature(0.25 * i + angle(rng), 3), 0.9, i));
    std::shuffle(dets.begin(), dets.end(), rng);
    for (int i = 0; i < 3; ++i) dets[i].det_id = i;

    // oracle: same costs on predicted tracks, minimum over the 6 permutations
    std::vector<Track> predicted = ts.active;
    for (auto& t : predicted) t.motion = motion::predict(t.motion, cfg.kalman);
    auto cost = [&](int r, int c) {
      const double app = cosine_distance(predicted[r].tracklet.ema_feature, dets[c].feature);
      if (app > cfg.appearance_reject) return kForbidden;
      const double m = motion::mahalanobis(predicted[r].motion, dets[c], [&] {
        auto k = cfg.kalman;
        k.smoothing = 0.0;
        return k;
      }());
      if (m > cfg.kalman.gate_threshold) return kForbidden;
      return cfg.appearance_weight * app + (1 - cfg.appearance_weight) * m / cfg.kalman.gate_threshold;
    };
    std::vector<int> perm{0, 1, 2}, best;
    double best_total = kForbidden;
    do {
      double total = 0.0;
      for (int r = 0; r < 3; ++r) total += cost(r, perm[r]);
      if (total < best_total) {
        best_total = total;
        best = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (!std::isfinite(best_total)) continue;

    ts = associate_frame(std::move(ts), dets, 1, cfg);
    ASSERT_EQ(ts.active.size(), 3u);
    for (int r = 0; r < 3; ++r) {
      const auto& t = ts.active[r];
      ASSERT_EQ(t.id(), predicted[r].id());
      EXPECT_EQ(t.last_box().rect, dets[best[r]].rect) << "trial " << trial;
    }
  }
}

TEST(AssociateFrame, StageBoundsHoldOnRandomScenes) {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> pos(0.0, 600.0), score(0.0, 1.0), noise(-5.0, 5.0);
  TrackerConfig cfg = no_strategies();
  for (int scene = 0; scene < 30; ++scene) {
    // a few slowly moving objects with random scores plus clutter
    const int objects = 6;
    std::vector<Rect> where(objects);
    std::vector<Feature> look(objects);
    for (int o = 0; o < objects; ++o) {
      where[o] = {pos(rng), pos(rng), 40, 30};
      look[o] = testing::random_feature(rng, 8);
    }
    TrackSet ts;
    for (int f = 0; f < 40; ++f) {
      std::vector<DetBox> dets;
      for (int o = 0; o < objects; ++o) {
        where[o].x += 3 + noise(rng) * 0.2;
        if (score(rng) < 0.15) continue;
        dets.push_back(make_box(f, {where[o].x + noise(rng), where[o].y + noise(rng), 40, 30}, look[o],
                                score(rng), 0));
      }
      if (score(rng) < 0.5)
        dets.push_back(make_box(f, {pos(rng), pos(rng), 40, 30}, testing::random_feature(rng, 8), score(rng)));
      for (std::size_t i = 0; i < dets.size(); ++i) dets[i].det_id = int(i);

      std::map<TrackId, Feature> ema_before;
      std::map<TrackId, std::size_t> len_before;
      for (const Track* t : live_tracks(ts)) {
        ema_before[t->id()] = t->tracklet.ema_feature;
        len_before[t->id()] = t->tracklet.length();
      }
      const TrackId first_new = ts.next_id;
      ts = associate_frame(std::move(ts), dets, f, cfg);

      std::set<int> used_dets;
      for (const Track* t : live_tracks(ts)) {
        if (!t->matched_this_frame) continue;
        const DetBox& d = t->last_box();
        ASSERT_EQ(d.frame, f);
        EXPECT_TRUE(used_dets.insert(d.det_id).second);
        if (t->id() >= first_new) {
          EXPECT_GT(d.score, cfg.high_score);
          EXPECT_EQ(t->tracklet.length(), 1u);
          continue;
        }
        EXPECT_EQ(t->tracklet.length(), len_before[t->id()] + 1);
        if (d.score > cfg.high_score)
          EXPECT_LE(cosine_distance(ema_before[t->id()], d.feature), cfg.appearance_reject);
        else
          EXPECT_GT(d.score, cfg.low_score);
      }
    }
  }
}

// ---------------------------------------------------------------- SSA

TEST(Ssa, MovingTrackletUntouched) {
  TrackerConfig cfg;
  cfg.use_bt = cfg.use_trl = false;
  auto run = straight_run(0, 60, 100, 200, 8, {1, 0});
  run.erase(run.begin() + 30, run.begin() + 36);
  const auto out = track_forward(frames_of({run}, 60), 0, cfg);
  ASSERT_EQ(out.size(), 1u);
  for (const auto& b : out[0].boxes) EXPECT_FALSE(b.interp);
}

TEST(Ssa, StationaryTrackletFrozenAcrossGap) {
  TrackerConfig cfg;
  cfg.use_bt = cfg.use_trl = false;
  std::vector<DetBox> run;
  // stopped for 30 frames, unseen for frames 30..44, then drives off
  for (int f = 0; f < 30; ++f) run.push_back(make_box(f, {300, 200, 40, 30}, {1, 0}, f == 12 ? 0.99 : 0.8));
  for (int f = 45; f < 70; ++f) run.push_back(make_box(f, {300.0 + 6 * (f - 45), 200, 40, 30}, {1, 0}, 0.8));
  const auto out = track_forward(frames_of({run}, 70), 0, cfg);
  ASSERT_EQ(out.size(), 1u);
  std::vector<const DetBox*> held;
  for (const auto& b : out[0].boxes)
    if (b.interp) held.push_back(&b);
  ASSERT_EQ(held.size(), 15u);
  for (const DetBox* b : held) {
    EXPECT_EQ(b->rect, (Rect{300, 200, 40, 30}));
    EXPECT_DOUBLE_EQ(b->score, 0.99);
  }
}

TEST(Ssa, IsStationaryNeedsACoveredWindow) {
  TrackerConfig cfg;
  Tracklet still = make_tracklet(1, 0, {});
  for (int f = 0; f < 10; ++f) still.boxes.push_back(make_box(f, {100, 100, 40, 30}));
  EXPECT_TRUE(is_stationary(still, cfg));
  Tracklet fresh = make_tracklet(2, 0, {make_box(0, {100, 100, 40, 30})});
  EXPECT_FALSE(is_stationary(fresh, cfg));
  Tracklet moving = make_tracklet(3, 0, straight_run(0, 10, 100, 100, 2, {1, 0}));
  EXPECT_FALSE(is_stationary(moving, cfg));
}

TEST(Ssa, TrailingHeldBoxesTrimmedAtClose) {
  TrackerConfig cfg;
  cfg.use_bt = cfg.use_trl = false;
  std::vector<DetBox> run;
  for (int f = 0; f < 20; ++f) run.push_back(make_box(f, {300, 200, 40, 30}));
  const auto out = track_forward(frames_of({run}, 80), 0, cfg);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].last_frame(), 19);
  EXPECT_FALSE(out[0].boxes.back().interp);
}

// ---------------------------------------------------------------- relink

TEST(Relink, NoMidSceneEndingsLeavesInputUnchanged) {
  const TrackerConfig cfg;
  const auto cam = test_camera();
  // full crossings from entry zone to exit zone
  std::vector<Tracklet> tracks{make_tracklet(1, 0, straight_run(0, 100, 10, 200, 9.5, {1, 0})),
                               make_tracklet(2, 0, straight_run(20, 100, 10, 400, 9.5, {0, 1}))};
  const auto out = relink(tracks, cfg, cam);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].boxes.size(), tracks[0].boxes.size());
  EXPECT_EQ(out[1].boxes.size(), tracks[1].boxes.size());
  EXPECT_TRUE(relink_candidates(tracks, cam, cfg).empty());
}

TEST(Relink, SplitPairWithIdenticalFeaturesMerges) {
  const TrackerConfig cfg;
  const auto run = straight_run(0, 100, 10, 200, 9.5, {1, 0});
  std::vector<DetBox> a(run.begin(), run.begin() + 40), b(run.begin() + 45, run.end());
  // the later segment got the smaller id; the earlier segment's id must survive
  std::vector<Tracklet> tracks{make_tracklet(9, 0, b), make_tracklet(4, 0, a)};
  const auto out = relink(tracks, cfg, test_camera());
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].track_id, 4);
  EXPECT_EQ(out[0].boxes.size(), 95u);
  for (std::size_t i = 1; i < out[0].boxes.size(); ++i) EXPECT_LT(out[0].boxes[i - 1].frame, out[0].boxes[i].frame);
}

TEST(Relink, OnlyTrueSplitPairsMerge) {
  TrackerConfig cfg;
  // wide spatial gate so appearance alone decides
  cfg.relink_spatial_gate = 100.0;
  // true pairs 0.1 apart, every cross distance above 0.4
  const double true_gap = std::acos(0.9);
  const Feature a0 = planar_feature(0.0), a1 = planar_feature(true_gap);
  const Feature b0 = planar_feature(1.6), b1 = planar_feature(1.6 + true_gap);
  ASSERT_NEAR(cosine_distance(a0, a1), 0.1, 1e-6);
  ASSERT_NEAR(cosine_distance(b0, b1), 0.1, 1e-6);
  for (const auto& [x, y] : {std::pair{a0, b1}, {b0, a1}, {a0, b0}, {a1, b1}}) ASSERT_GT(cosine_distance(x, y), 0.4);

  const auto ra = straight_run(0, 100, 10, 150, 9.5, a0);
  const auto rb = straight_run(0, 100, 10, 400, 9.5, b0);
  auto recolor = [](std::vector<DetBox> v, const Feature& f) {
    for (auto& b : v) b.feature = f;
    return v;
  };
  std::vector<Tracklet> tracks{
      make_tracklet(1, 0, {ra.begin(), ra.begin() + 40}),
      make_tracklet(2, 0, {rb.begin(), rb.begin() + 42}),
      make_tracklet(3, 0, recolor({ra.begin() + 46, ra.end()}, a1)),
      make_tracklet(4, 0, recolor({rb.begin() + 47, rb.end()}, b1)),
  };
  const auto cands = relink_candidates(tracks, test_camera(), cfg);
  ASSERT_EQ(cands.size(), 2u);
  const auto out = relink(tracks, cfg, test_camera());
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].track_id, 1);
  EXPECT_EQ(out[1].track_id, 2);
  EXPECT_EQ(out[0].boxes.back().rect.y, 150);
  EXPECT_EQ(out[1].boxes.back().rect.y, 400);
  EXPECT_EQ(out[0].boxes.size(), 40u + 54u);
  EXPECT_EQ(out[1].boxes.size(), 42u + 53u);
}

TEST(Relink, NeverMergesOverlappingOrDistantTracklets) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> start(0, 150), len(5, 60);
  std::uniform_real_distribution<double> y(100, 500), ang(0.0, 0.6);
  const TrackerConfig cfg;
  const auto cam = test_camera();
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<Tracklet> tracks;
    for (int i = 0; i < 8; ++i) {
      const int s = start(rng);
      tracks.push_back(make_tracklet(i + 1, 0, straight_run(s, len(rng), 150 + 3 * s, y(rng), 3, planar_feature(ang(rng), 4))));
    }
    for (const auto& c : relink_candidates(tracks, cam, cfg)) {
      EXPECT_GT(tracks[c.started].first_frame(), tracks[c.ended].last_frame());
      EXPECT_LE(c.distance, cfg.relink_threshold);
    }
    const auto out = relink(tracks, cfg, cam);
    std::size_t total = 0;
    for (const auto& t : out) {
      total += t.boxes.size();
      for (std::size_t i = 1; i < t.boxes.size(); ++i) ASSERT_LT(t.boxes[i - 1].frame, t.boxes[i].frame);
    }
    EXPECT_EQ(total, 8 * 0 + [&] {
      std::size_t n = 0;
      for (const auto& t : tracks) n += t.boxes.size();
      return n;
    }());
  }
}

TEST(Relink, InSceneMiddleExcludesBorderAndZones) {
  const auto cam = test_camera();
  EXPECT_TRUE(in_scene_middle({500, 300}, cam, 0.05));
  EXPECT_FALSE(in_scene_middle({80, 300}, cam, 0.05));   // entry zone
  EXPECT_FALSE(in_scene_middle({500, 10}, cam, 0.05));   // top border
  EXPECT_FALSE(in_scene_middle({500, 590}, cam, 0.05));  // bottom border
}

// ---------------------------------------------------------------- BT

std::set<std::pair<int, int>> box_keys(const std::vector<Tracklet>& ts) {
  std::set<std::pair<int, int>> out;
  for (const auto& t : ts)
    for (const auto& b : t.boxes) out.insert({b.frame, int(std::lround(b.rect.x * 16))});
  return out;
}

TEST(Bidirectional, CompleteForwardRunUnchanged) {
  TrackerConfig cfg = no_strategies();
  const auto frames = frames_of({straight_run(0, 80, 10, 200, 9.5, {1, 0}), straight_run(10, 60, 10, 400, 9.5, {0, 1})}, 90);
  const auto fwd = track_forward(frames, 0, cfg);
  const auto both = track_bidirectional(frames, 0, cfg);
  ASSERT_EQ(fwd.size(), both.size());
  EXPECT_EQ(box_keys(fwd), box_keys(both));
}

TEST(Bidirectional, RecoversLowConfidenceOnset) {
  TrackerConfig cfg = no_strategies();
  auto run = straight_run(0, 80, 10, 200, 9.5, {1, 0});
  // the first 12 boxes are below high_score: forward tracking cannot start a track there
  for (int i = 0; i < 12; ++i) run[i].score = 0.4;
  const auto frames = frames_of({run}, 80);
  const auto fwd = track_forward(frames, 0, cfg);
  ASSERT_EQ(fwd.size(), 1u);
  EXPECT_EQ(fwd[0].first_frame(), 12);
  const auto both = track_bidirectional(frames, 0, cfg);
  ASSERT_EQ(both.size(), 1u);
  EXPECT_LE(both[0].first_frame(), fwd[0].first_frame() - 10);
  EXPECT_EQ(both[0].boxes.size(), 80u);
}

TEST(Bidirectional, BackwardBoxesKeepOriginalFrames) {
  TrackerConfig cfg = no_strategies();
  const auto frames = frames_of({straight_run(5, 40, 200, 200, 4, {1, 0})}, 50);
  const auto bwd = track_backward(frames, 0, cfg);
  ASSERT_EQ(bwd.size(), 1u);
  EXPECT_EQ(bwd[0].boxes.front().frame, 5);
  EXPECT_EQ(bwd[0].boxes.back().frame, 44);
}

TEST(Bidirectional, EmptyVideo) {
  const TrackerConfig cfg;
  EXPECT_TRUE(track_bidirectional({}, 0, cfg).empty());
  EXPECT_TRUE(track_bidirectional(FrameList(20), 0, cfg).empty());
  EXPECT_TRUE(track_camera({}, test_camera(), cfg).empty());
}

TEST(Bidirectional, OutputCoversForwardBoxes) {
  std::mt19937 rng(19);
  std::uniform_real_distribution<double> u(0, 1);
  TrackerConfig cfg;
  cfg.use_trl = false;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::vector<DetBox>> objects;
    for (int o = 0; o < 4; ++o) {
      auto run = straight_run(o * 7, 90, 10, 100 + 110 * o, 9.5, planar_feature(0.5 * o, 4));
      for (auto& b : run) b.score = u(rng) < 0.2 ? 0.35 : 0.85;
      objects.push_back(run);
    }
    const auto frames = frames_of(objects, 120);
    const auto fwd = track_forward(frames, 0, cfg);
    const auto both = track_bidirectional(frames, 0, cfg);
    const auto have = box_keys(both);
    for (const auto& k : box_keys(fwd)) EXPECT_TRUE(have.count(k));
  }
}

// ---------------------------------------------------------------- track_camera

TEST(TrackCamera, SingleCleanTarget) {
  const TrackerConfig cfg;
  const auto frames = frames_of({straight_run(0, 100, 10, 200, 9.5, {1, 0})}, 100);
  const auto out = track_camera(frames, test_camera(), cfg);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].first_frame(), 0);
  EXPECT_EQ(out[0].last_frame(), 99);
  EXPECT_EQ(out[0].boxes.size(), 100u);
}

TEST(TrackCamera, TwoSeparateTargetsTwoTracklets) {
  const TrackerConfig cfg;
  const auto frames = frames_of({straight_run(0, 100, 10, 150, 9.5, {1, 0}), straight_run(0, 100, 10, 450, 9.5, {0, 1})}, 100);
  const auto out = track_camera(frames, test_camera(), cfg);
  ASSERT_EQ(out.size(), 2u);
  for (const auto& t : out) {
    EXPECT_EQ(t.boxes.size(), 100u);
    // no identity switch: every box keeps the lane it started in
    for (const auto& b : t.boxes) EXPECT_EQ(b.rect.y, t.boxes.front().rect.y);
  }
}

TEST(TrackCamera, EveryBoxInOneTrackletAndDeterministic) {
  std::mt19937 rng(90);
  std::uniform_real_distribution<double> u(0, 1);
  const TrackerConfig cfg;
  std::vector<std::vector<DetBox>> objects;
  for (int o = 0; o < 6; ++o) {
    auto run = straight_run(o * 5, 80, 10 + 20 * (o % 2), 100 + 60 * o, 9 + 0.3 * o, planar_feature(0.4 * o, 6));
    std::vector<DetBox> kept;
    for (auto& b : run) {
      b.score = 0.3 + 0.7 * u(rng);
      if (u(rng) > 0.1) kept.push_back(b);
    }
    objects.push_back(kept);
  }
  const auto frames = frames_of(objects, 120);
  const auto out = track_camera(frames, test_camera(), cfg);
  std::set<std::pair<int, int>> seen;
  std::set<TrackId> ids;
  for (const auto& t : out) {
    EXPECT_TRUE(ids.insert(t.track_id).second);
    for (std::size_t i = 0; i < t.boxes.size(); ++i) {
      if (i > 0) EXPECT_LT(t.boxes[i - 1].frame, t.boxes[i].frame);
      if (t.boxes[i].interp) continue;
      EXPECT_TRUE(seen.insert({t.boxes[i].frame, t.boxes[i].det_id}).second);
    }
  }
  const auto again = track_camera(frames, test_camera(), cfg);
  ASSERT_EQ(again.size(), out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    EXPECT_EQ(again[i].track_id, out[i].track_id);
    ASSERT_EQ(again[i].boxes.size(), out[i].boxes.size());
    for (std::size_t k = 0; k < out[i].boxes.size(); ++k) EXPECT_EQ(again[i].boxes[k].rect, out[i].boxes[k].rect);
  }
}

TEST(TrackerConfig, ValidateRejectsOutOfRange) {
  TrackerConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.low_score = 0.7;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = TrackerConfig{};
  cfg.ema_momentum = 1.5;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = TrackerConfig{};
  cfg.max_lost = -1;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

}  // namespace
}  // namespace mcmt::scmt
