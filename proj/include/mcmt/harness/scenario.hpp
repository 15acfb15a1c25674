#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mcmt/core/types.hpp"
#include "mcmt/eval/metrics.hpp"
#include "mcmt/scmt/tracker.hpp"

namespace mcmt::harness {

enum class OcclusionMode { drop, low_score };

// Explicit occlusion of one vehicle in one camera over [start, end] (frames relative to the
// vehicle's first frame in that camera).
struct OcclusionEvent {
  CameraId camera = 0;
  int vehicle = 0;
  int start = 0;
  int end = 0;
  OcclusionMode mode = OcclusionMode::drop;
};

struct ScenarioConfig {
  std::uint64_t seed = 1;
  int cameras = 3;
  double frame_width = 1280.0;
  double frame_height = 720.0;
  double fps = 10.0;
  double zone_fraction = 0.12;  // entry/exit zone width as a fraction of the frame width

  int vehicles = 10;
  int feature_dim = 64;
  double feature_noise = 0.05;  // expected norm of the per-box appearance noise
  double camera_shift = 0.15;   // norm of the per-(vehicle, camera) appearance offset
  int similar_pairs = 0;        // vehicles (2i, 2i+1) share a base appearance
  double similar_separation = 0.1;
  double occlusion_mixing = 1.0;  // how strongly an occluder's appearance leaks into a box

  double speed_min = 10.0;  // px per frame
  double speed_max = 14.0;
  bool speed_per_camera = false;
  double box_w = 80.0;
  double box_h = 56.0;
  double size_jitter = 0.05;  // relative per-vehicle size variation
  int lanes = 10;
  double lane_top = 40.0;
  double lane_spacing = 64.0;
  bool shuffle_lanes = false;  // draw a new lane per camera instead of vehicle % lanes
  int lead_in = 5;
  int spawn_gap_min = 8;
  int spawn_gap_max = 20;

  double travel_min = 30.0;  // travel window [T_low, T_upp] of every link, frames
  double travel_max = 60.0;
  double outlier_fraction = 0.0;

  double stop_fraction = 0.0;  // share of (vehicle, camera) passages that stop once
  int stop_min = 40;
  int stop_max = 60;
  double stop_position = 0.5;  // fraction of the frame width
  int stop_ramp = 10;          // frames spent braking, and again accelerating
  bool stop_occluded = true;   // detections vanish while stopped

  double occlusion_fraction = 0.0;  // share of frames degraded by short occlusions
  int occlusion_span_min = 3;
  int occlusion_span_max = 10;
  double occlusion_drop_share = 0.3;  // remaining spans lower the score instead
  double split_fraction = 0.0;        // share of passages with one long drop while moving
  int split_min = 35;
  int split_max = 50;
  std::vector<OcclusionEvent> occlusions;

  int low_conf_onset = 0;  // frames at the start of every passage below the high score
  double score_mean = 0.85;
  double score_jitter = 0.06;
  double low_band_min = 0.15;
  double low_band_max = 0.55;
  double box_jitter = 0.8;  // px
  int decoys = 0;           // early look-alikes in the last camera, outside every entering window
  int tail = 10;            // frames recorded after the last vehicle leaves

  // Throws ConfigError for infeasible settings.
  void validate() const;
};

struct GtBox {
  FrameIndex frame = 0;
  int id = 0;
  Rect rect;
  bool visible = true;
};

struct Scenario {
  ScenarioConfig config;
  CameraTopology topology;
  int frames = 0;
  std::map<CameraId, scmt::FrameList> detections;
  std::map<CameraId, std::vector<GtBox>> ground_truth;
  std::vector<int> decoy_ids;  // ground-truth ids of decoy vehicles
};

// Deterministic for a given config (including seed).
Scenario generate_scenario(const ScenarioConfig& cfg);

// Named scenario families used by the tests, the CLI and the ablation grid:
// "corridor", "noisy", "stop_and_go", "similar".
ScenarioConfig preset(const std::string& name, std::uint64_t seed);
std::vector<std::string> preset_names();

// Ground truth as an evaluation sequence. With `cross_camera_only`, vehicles seen by a
// single camera are left out. Ids are global vehicle ids, or (camera, vehicle) encodings
// when `per_camera_ids` is set.
eval::Sequence gt_sequence(const std::map<CameraId, std::vector<GtBox>>& gt, bool cross_camera_only,
                           bool per_camera_ids);

// Per-camera identity encoding shared by ground truth and single-camera predictions.
inline int camera_scoped_id(CameraId camera, int id) { return camera * 1000000 + id; }

}  // namespace mcmt::harness
