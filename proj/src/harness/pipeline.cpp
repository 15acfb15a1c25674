#include "mcmt/harness/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <json.hpp>
#include <mutex>
#include <thread>

#include "mcmt/core/errors.hpp"
#include "mcmt/core/geometry.hpp"
#include "mcmt/harness/io.hpp"
#include "mcmt/ica/association.hpp"
#include "mcmt/ica/pool.hpp"
#include "mcmt/scmt/bidirectional.hpp"

namespace mcmt::harness {
namespace {

// Rethrows the active exception with `ctx` prepended, keeping its type.
[[noreturn]] void rethrow_with(const std::string& ctx) {
  try {
    throw;
  } catch (const ParseError& e) {
    throw ParseError(ctx + ": " + e.what());
  } catch (const IntegrityError& e) {
    throw IntegrityError(ctx + ": " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(ctx + ": " + e.what());
  } catch (const UsageError& e) {
    throw UsageError(ctx + ": " + e.what());
  } catch (const UndefinedMetricError& e) {
    throw UndefinedMetricError(ctx + ": " + e.what());
  } catch (const std::exception& e) {
    throw std::runtime_error(ctx + ": " + e.what());
  }
}

}  // namespace

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& task) {
  std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, jobs)));
  std::vector<std::exception_ptr> errors(n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            task(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    for (std::thread& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void annotate_occlusion(std::vector<Tracklet>& tracks) {
  std::map<FrameIndex, std::vector<DetBox>> by_frame;
  for (const Tracklet& t : tracks)
    for (const DetBox& b : t.boxes) by_frame[b.frame].push_back(b);
  for (Tracklet& t : tracks)
    for (DetBox& b : t.boxes) b.occlusion = occlusion_rate(b, by_frame[b.frame]);
}

CameraTracks track_all(const CameraTopology& topology, const std::map<CameraId, scmt::FrameList>& detections,
                       const scmt::TrackerConfig& cfg, int jobs) {
  std::vector<const CameraInfo*> cams;
  for (const CameraInfo& c : topology.cameras)
    if (detections.count(c.id)) cams.push_back(&c);
  std::vector<std::vector<Tracklet>> out(cams.size());
  parallel_for(cams.size(), jobs, [&](std::size_t i) {
    try {
      out[i] = scmt::track_camera(detections.at(cams[i]->id), *cams[i], cfg);
    } catch (...) {
      rethrow_with("camera " + std::to_string(cams[i]->id));
    }
  });
  CameraTracks tracks;
  for (std::size_t i = 0; i < cams.size(); ++i) tracks[cams[i]->id] = std::move(out[i]);
  return tracks;
}

ica::GlobalAssignment associate_all(const CameraTopology& topology, CameraTracks& tracks,
                                    const ica::IcaConfig& cfg, int jobs) {
  for (auto& [cam, list] : tracks) annotate_occlusion(list);
  const std::vector<Tracklet> none;
  auto tracks_of = [&](CameraId c) -> const std::vector<Tracklet>& {
    auto it = tracks.find(c);
    return it == tracks.end() ? none : it->second;
  };
  std::vector<std::vector<ica::CrossPair>> per_link(topology.links.size());
  parallel_for(topology.links.size(), jobs, [&](std::size_t i) {
    const CameraLink& link = topology.links[i];
    try {
      const CameraInfo* out_cam = topology.find_camera(link.cam_out);
      const CameraInfo* in_cam = topology.find_camera(link.cam_in);
      if (!out_cam || !in_cam) throw ConfigError("unknown camera");
      ica::PoolPair pool = ica::build_pool(tracks_of(link.cam_out), *out_cam, tracks_of(link.cam_in), *in_cam, link);
      for (const ica::LinkMatch& m : ica::match_link(pool, cfg))
        per_link[i].push_back(ica::CrossPair{{link.cam_out, pool.exiting[m.exiting].track_id},
                                             {link.cam_in, pool.entering[m.entering].track_id},
                                             pool.t_out[m.exiting], pool.t_in[m.entering], m.score});
    } catch (...) {
      rethrow_with("link " + std::to_string(link.cam_out) + "->" + std::to_string(link.cam_in));
    }
  });
  std::vector<ica::CrossPair> pairs;
  for (auto& p : per_link) pairs.insert(pairs.end(), p.begin(), p.end());
  std::vector<ica::TrackletKey> keys;
  for (const auto& [cam, list] : tracks)
    for (const Tracklet& t : list) keys.push_back({cam, t.track_id});
  return ica::postprocess(pairs, keys, cfg.include_single_camera);
}

McmtResult run_mcmt(const CameraTopology& topology, const std::map<CameraId, scmt::FrameList>& detections,
                    const scmt::TrackerConfig& tracker, const ica::IcaConfig& ica, int jobs) {
  McmtResult r;
  r.tracks = track_all(topology, detections, tracker, jobs);
  r.global = associate_all(topology, r.tracks, ica, jobs);
  return r;
}

eval::Sequence mcmt_prediction(const CameraTracks& tracks, const ica::GlobalAssignment& global) {
  eval::Sequence seq;
  for (const auto& [cam, list] : tracks)
    for (const Tracklet& t : list) {
      auto gid = global.global_id({cam, t.track_id});
      if (!gid) continue;
      for (const DetBox& b : t.boxes) seq.add(cam, b.frame, eval::Observation{*gid, b.rect, true});
    }
  return seq;
}

eval::Sequence scmt_prediction(const CameraTracks& tracks) {
  eval::Sequence seq;
  for (const auto& [cam, list] : tracks)
    for (const Tracklet& t : list)
      for (const DetBox& b : t.boxes)
        seq.add(cam, b.frame, eval::Observation{camera_scoped_id(cam, t.track_id), b.rect, true});
  return seq;
}

eval::MetricReport evaluate_mcmt(const std::map<CameraId, std::vector<GtBox>>& gt, const McmtResult& result,
                                 double iou_min) {
  return eval::evaluate(gt_sequence(gt, true, false), mcmt_prediction(result.tracks, result.global), iou_min);
}

eval::MetricReport evaluate_scmt(const std::map<CameraId, std::vector<GtBox>>& gt, const CameraTracks& tracks,
                                 double iou_min) {
  return eval::evaluate(gt_sequence(gt, false, true), scmt_prediction(tracks), iou_min);
}

std::string metrics_to_json(const eval::MetricReport& m) {
  nlohmann::ordered_json j = {{"idf1", m.idf1}, {"idp", m.idp},   {"idr", m.idr},   {"mota", m.mota},
                              {"idsw", m.idsw}, {"fp", m.fp},     {"fn", m.fn},     {"gt_count", m.gt_count},
                              {"pred_count", m.pred_count},       {"idtp", m.idtp}, {"idfp", m.idfp},
                              {"idfn", m.idfn}};
  return j.dump(2) + "\n";
}

std::optional<eval::MetricReport> run_pipeline(const RunConfig& run) {
  run.validate();
  std::map<CameraId, scmt::FrameList> detections;
  std::map<CameraId, std::vector<GtBox>> gt;
  for (const CameraInfo& c : run.topology.cameras) {
    try {
      detections[c.id] = load_detections(Layout::detections(run.input, c.id), Layout::det_features(run.input, c.id));
      if (fs::exists(Layout::ground_truth(run.input, c.id)))
        gt[c.id] = load_ground_truth(Layout::ground_truth(run.input, c.id));
    } catch (...) {
      rethrow_with("camera " + std::to_string(c.id));
    }
  }
  McmtResult r = run_mcmt(run.topology, detections, run.tracker, run.ica, run.jobs);
  fs::create_directories(run.output);
  std::vector<CameraId> cams;
  for (const auto& [cam, list] : r.tracks) cams.push_back(cam);
  parallel_for(cams.size(), run.jobs, [&](std::size_t i) {
    CameraId c = cams[i];
    write_tracks(Layout::tracks(run.output, c), Layout::track_features(run.output, c), r.tracks.at(c));
  });
  write_global(Layout::global(run.output), r.global);
  if (gt.size() != run.topology.cameras.size()) return std::nullopt;
  eval::MetricReport m = evaluate_mcmt(gt, r, run.iou_min);
  write_text(Layout::metrics(run.output), metrics_to_json(m));
  return m;
}

}  // namespace mcmt::harness
