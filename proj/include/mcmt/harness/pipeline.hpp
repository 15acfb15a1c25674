#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "mcmt/eval/metrics.hpp"
#include "mcmt/harness/config.hpp"
#include "mcmt/harness/scenario.hpp"
#include "mcmt/ica/postprocess.hpp"
#include "mcmt/scmt/tracker.hpp"

namespace mcmt::harness {

using CameraTracks = std::map<CameraId, std::vector<Tracklet>>;

// Runs task(i) for i in [0, n) on at most `jobs` threads. The exception of the lowest
// failing index is rethrown after all workers finish.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& task);

// Fills DetBox::occlusion of every box from the co-temporal boxes of the same camera.
void annotate_occlusion(std::vector<Tracklet>& tracks);

// Single-camera tracking of every camera in the topology that has detections.
CameraTracks track_all(const CameraTopology& topology, const std::map<CameraId, scmt::FrameList>& detections,
                       const scmt::TrackerConfig& cfg, int jobs = 1);

// Per-link matching followed by the global merge. Annotates occlusion rates in place.
ica::GlobalAssignment associate_all(const CameraTopology& topology, CameraTracks& tracks,
                                    const ica::IcaConfig& cfg, int jobs = 1);

struct McmtResult {
  CameraTracks tracks;
  ica::GlobalAssignment global;
};

McmtResult run_mcmt(const CameraTopology& topology, const std::map<CameraId, scmt::FrameList>& detections,
                    const scmt::TrackerConfig& tracker, const ica::IcaConfig& ica, int jobs = 1);

// Output boxes of globally identified tracklets, labelled with their global id.
eval::Sequence mcmt_prediction(const CameraTracks& tracks, const ica::GlobalAssignment& global);
// Output boxes with camera-scoped track ids.
eval::Sequence scmt_prediction(const CameraTracks& tracks);

// Cross-camera evaluation against vehicles seen by at least two cameras.
eval::MetricReport evaluate_mcmt(const std::map<CameraId, std::vector<GtBox>>& gt, const McmtResult& result,
                                 double iou_min = 0.5);
// Single-camera evaluation with camera-scoped identities.
eval::MetricReport evaluate_scmt(const std::map<CameraId, std::vector<GtBox>>& gt, const CameraTracks& tracks,
                                 double iou_min = 0.5);

// File-level pipeline: reads detections (and ground truth when present) from run.input,
// writes tracks, global ids and metrics to run.output. Returns the metrics when
// ground truth was found.
std::optional<eval::MetricReport> run_pipeline(const RunConfig& run);

std::string metrics_to_json(const eval::MetricReport& m);

}  // namespace mcmt::harness
