#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mcmt/core/types.hpp"
#include "mcmt/harness/scenario.hpp"
#include "mcmt/ica/postprocess.hpp"
#include "mcmt/scmt/tracker.hpp"

namespace mcmt::harness {

namespace fs = std::filesystem;

// Shortest decimal text that parses back to the same double.
std::string format_number(double v);

// Feature matrix: u32 rows, u32 dim, then rows * dim little-endian float32.
void write_feature_matrix(const fs::path& path, const std::vector<const Feature*>& rows);
std::vector<Feature> read_feature_matrix(const fs::path& path);

// Detection table `frame,det_id,x,y,w,h,score` plus its feature matrix.
void write_detections(const fs::path& csv, const fs::path& features, const scmt::FrameList& frames);
// Throws ParseError (with line) for malformed rows, NaN values or non-positive sizes, and
// IntegrityError when the table and matrix disagree.
scmt::FrameList load_detections(const fs::path& csv, const fs::path& features);

// Tracking output `frame,track_id,x,y,w,h,score,interp` plus per-row features.
void write_tracks(const fs::path& csv, const fs::path& features, const std::vector<Tracklet>& tracks);
std::vector<Tracklet> load_tracks(const fs::path& csv, const fs::path& features, CameraId camera);

// `camera_id,track_id,global_id`, sorted by (camera, track).
void write_global(const fs::path& csv, const ica::GlobalAssignment& global);
std::map<ica::TrackletKey, int> load_global(const fs::path& csv);

// `frame,id,x,y,w,h,visible`.
void write_ground_truth(const fs::path& csv, const std::vector<GtBox>& gt);
std::vector<GtBox> load_ground_truth(const fs::path& csv);

// Directory layout shared by the CLI subcommands.
struct Layout {
  static fs::path topology(const fs::path& dir) { return dir / "topology.json"; }
  static fs::path scenario(const fs::path& dir) { return dir / "scenario.json"; }
  static fs::path detections(const fs::path& dir, CameraId c) { return dir / ("det_c" + std::to_string(c) + ".csv"); }
  static fs::path det_features(const fs::path& dir, CameraId c) { return dir / ("det_c" + std::to_string(c) + ".f32"); }
  static fs::path ground_truth(const fs::path& dir, CameraId c) { return dir / ("gt_c" + std::to_string(c) + ".csv"); }
  static fs::path tracks(const fs::path& dir, CameraId c) { return dir / ("tracks_c" + std::to_string(c) + ".csv"); }
  static fs::path track_features(const fs::path& dir, CameraId c) { return dir / ("tracks_c" + std::to_string(c) + ".f32"); }
  static fs::path global(const fs::path& dir) { return dir / "global.csv"; }
  static fs::path metrics(const fs::path& dir) { return dir / "metrics.json"; }
};

// Writes topology, scenario config, detections and ground truth of every camera.
void write_scenario(const fs::path& dir, const Scenario& sc);

// Writes `text` to `path`, replacing it.
void write_text(const fs::path& path, const std::string& text);
std::string read_text(const fs::path& path);

}  // namespace mcmt::harness
