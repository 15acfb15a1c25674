#include "mcmt/harness/config.hpp"

#include <functional>
#include <json.hpp>

#include "mcmt/core/errors.hpp"
#include "mcmt/harness/io.hpp"

namespace mcmt::harness {
namespace {

using Json = nlohmann::ordered_json;

// Binds JSON keys to struct fields, in declaration order.
class Fields {
 public:
  explicit Fields(std::string context) : context_(std::move(context)) {}

  template <class T>
  Fields& add(const std::string& key, T& ref) {
    entries_.push_back({key, [&ref, key, ctx = context_](const Json& j) {
                          try {
                            ref = j.get<T>();
                          } catch (const Json::exception&) {
                            throw ConfigError(ctx + "." + key + ": wrong type");
                          }
                          if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
                            if (!j.is_number_integer() && !j.is_number_unsigned())
                              throw ConfigError(ctx + "." + key + ": expected an integer");
                          }
                          if constexpr (std::is_same_v<T, bool>) {
                            if (!j.is_boolean()) throw ConfigError(ctx + "." + key + ": expected a boolean");
                          }
                        },
                        [&ref] { return Json(ref); }});
    return *this;
  }

  Fields& custom(const std::string& key, std::function<void(const Json&)> read, std::function<Json()> write) {
    entries_.push_back({key, std::move(read), std::move(write)});
    return *this;
  }

  void read(const Json& j) const {
    if (!j.is_object()) throw ConfigError(context_ + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
      auto e = std::find_if(entries_.begin(), entries_.end(), [&](const Entry& x) { return x.key == it.key(); });
      if (e == entries_.end()) throw ConfigError(context_ + ": unknown key '" + it.key() + "'");
      e->read(it.value());
    }
  }

  Json write() const {
    Json j = Json::object();
    for (const Entry& e : entries_) j[e.key] = e.write();
    return j;
  }

 private:
  struct Entry {
    std::string key;
    std::function<void(const Json&)> read;
    std::function<Json()> write;
  };
  std::string context_;
  std::vector<Entry> entries_;
};

template <class E>
Fields& enum_field(Fields& f, const std::string& key, E& ref, std::vector<std::pair<E, std::string>> names,
                   const std::string& ctx) {
  return f.custom(
      key,
      [&ref, names, key, ctx](const Json& j) {
        if (!j.is_string()) throw ConfigError(ctx + "." + key + ": expected a string");
        for (const auto& [v, n] : names)
          if (n == j.get<std::string>()) {
            ref = v;
            return;
          }
        throw ConfigError(ctx + "." + key + ": unknown value '" + j.get<std::string>() + "'");
      },
      [&ref, names] {
        for (const auto& [v, n] : names)
          if (v == ref) return Json(n);
        return Json();
      });
}

Fields kalman_fields(motion::KalmanConfig& c) {
  Fields f("tracker.kalman");
  f.add("std_weight_position", c.std_weight_position)
      .add("std_weight_velocity", c.std_weight_velocity)
      .add("smoothing", c.smoothing)
      .add("gate_threshold", c.gate_threshold)
      .add("min_noise_scale", c.min_noise_scale);
  return f;
}

Fields tracker_fields(scmt::TrackerConfig& c) {
  Fields f("tracker");
  f.add("high_score", c.high_score)
      .add("low_score", c.low_score)
      .add("appearance_reject", c.appearance_reject)
      .add("max_lost", c.max_lost)
      .add("ema_momentum", c.ema_momentum)
      .add("appearance_weight", c.appearance_weight)
      .add("relink_threshold", c.relink_threshold)
      .add("relink_max_gap", c.relink_max_gap)
      .add("relink_spatial_gate", c.relink_spatial_gate)
      .add("relink_feature_window", c.relink_feature_window)
      .add("border_margin", c.border_margin)
      .add("stationary_window", c.stationary_window)
      .add("stationary_eps", c.stationary_eps)
      .add("stationary_max_hold", c.stationary_max_hold)
      .add("bidirectional_iou", c.bidirectional_iou)
      .add("use_ssa", c.use_ssa)
      .add("use_trl", c.use_trl)
      .add("use_bt", c.use_bt);
  f.custom("kalman", [&c](const Json& j) { kalman_fields(c.kalman).read(j); },
           [&c] { return kalman_fields(c.kalman).write(); });
  return f;
}

Fields ica_fields(ica::IcaConfig& c) {
  Fields f("ica");
  f.add("k_mean", c.k_mean)
      .add("alpha_penalty", c.alpha_penalty)
      .add("alpha_t", c.alpha_t)
      .add("beta_t", c.beta_t)
      .add("alpha_o", c.alpha_o)
      .add("r_thre", c.r_thre)
      .add("k_reciprocal", c.k_reciprocal)
      .add("rerank_k1", c.rerank_k1)
      .add("rerank_k2", c.rerank_k2)
      .add("rerank_lambda", c.rerank_lambda)
      .add("min_votes", c.min_votes)
      .add("hungarian_threshold", c.hungarian_threshold);
  enum_field(f, "granularity", c.granularity,
             {{ica::Granularity::tracklet, "tracklet"}, {ica::Granularity::box, "box"}}, "ica");
  enum_field(f, "matcher", c.matcher,
             {{ica::Matcher::hungarian, "hungarian"}, {ica::Matcher::k_reciprocal, "k_reciprocal"}}, "ica");
  f.add("use_rerank", c.use_rerank)
      .add("use_time_refine", c.use_time_refine)
      .add("use_occlusion_refine", c.use_occlusion_refine)
      .add("include_single_camera", c.include_single_camera);
  return f;
}

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < std::min(e.byte, text.size()); ++i) line += text[i] == '\n';
    throw ParseError(std::string("invalid JSON: ") + e.what(), line);
  }
}

template <class T>
T required(const Json& j, const char* key, const std::string& ctx) {
  if (!j.contains(key)) throw ConfigError(ctx + ": missing '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw ConfigError(ctx + "." + key + ": wrong type");
  }
}

void only_keys(const Json& j, std::initializer_list<const char*> keys, const std::string& ctx) {
  if (!j.is_object()) throw ConfigError(ctx + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return it.key() == k; }))
      throw ConfigError(ctx + ": unknown key '" + it.key() + "'");
}

std::string kind_name(ZoneKind k) {
  switch (k) {
    case ZoneKind::entry: return "entry";
    case ZoneKind::exit: return "exit";
    case ZoneKind::both: return "both";
  }
  return "both";
}

Json topology_json(const CameraTopology& t) {
  Json cams = Json::array();
  for (const CameraInfo& c : t.cameras) {
    Json zones = Json::array();
    for (const Zone& z : c.zones) {
      Json poly = Json::array();
      for (const Point& p : z.polygon) poly.push_back({p.x, p.y});
      zones.push_back({{"id", z.zone_id}, {"kind", kind_name(z.kind)}, {"polygon", poly}});
    }
    cams.push_back({{"id", c.id}, {"width", c.width}, {"height", c.height}, {"fps", c.fps}, {"zones", zones}});
  }
  Json links = Json::array();
  for (const CameraLink& l : t.links)
    links.push_back({{"cam_out", l.cam_out}, {"zone_out", l.zone_out}, {"cam_in", l.cam_in}, {"zone_in", l.zone_in},
                     {"t_out", l.t_out_max}, {"t_in", l.t_in_min}, {"t_low", l.t_low}, {"t_upp", l.t_upp},
                     {"beta_t", l.beta_t}});
  return {{"cameras", cams}, {"links", links}};
}

CameraTopology topology_parse(const Json& j) {
  only_keys(j, {"cameras", "links"}, "topology");
  CameraTopology t;
  Json cams = j.value("cameras", Json::array());
  if (!cams.is_array()) throw ConfigError("topology.cameras: expected an array");
  for (const Json& c : cams) {
    only_keys(c, {"id", "width", "height", "fps", "zones"}, "topology.cameras[]");
    CameraInfo info;
    info.id = required<CameraId>(c, "id", "topology.cameras[]");
    std::string ctx = "topology.cameras[" + std::to_string(info.id) + "]";
    info.width = required<double>(c, "width", ctx);
    info.height = required<double>(c, "height", ctx);
    if (c.contains("fps")) info.fps = required<double>(c, "fps", ctx);
    if (!(info.width > 0.0) || !(info.height > 0.0) || !(info.fps > 0.0))
      throw ConfigError(ctx + ": width, height and fps must be positive");
    for (const Json& z : c.value("zones", Json::array())) {
      only_keys(z, {"id", "kind", "polygon"}, ctx + ".zones[]");
      Zone zone;
      zone.zone_id = required<int>(z, "id", ctx + ".zones[]");
      std::string kind = z.contains("kind") ? required<std::string>(z, "kind", ctx) : "both";
      if (kind == "entry") zone.kind = ZoneKind::entry;
      else if (kind == "exit") zone.kind = ZoneKind::exit;
      else if (kind == "both") zone.kind = ZoneKind::both;
      else throw ConfigError(ctx + ".zones[]: unknown kind '" + kind + "'");
      auto poly = required<std::vector<std::vector<double>>>(z, "polygon", ctx + ".zones[]");
      for (const auto& p : poly) {
        if (p.size() != 2) throw ConfigError(ctx + ".zones[]: polygon points need two coordinates");
        zone.polygon.push_back({p[0], p[1]});
      }
      info.zones.push_back(std::move(zone));
    }
    t.cameras.push_back(std::move(info));
  }
  Json links = j.value("links", Json::array());
  if (!links.is_array()) throw ConfigError("topology.links: expected an array");
  for (const Json& l : links) {
    only_keys(l, {"cam_out", "zone_out", "cam_in", "zone_in", "t_out", "t_in", "t_low", "t_upp", "beta_t"},
              "topology.links[]");
    CameraLink link;
    link.cam_out = required<CameraId>(l, "cam_out", "topology.links[]");
    link.zone_out = required<int>(l, "zone_out", "topology.links[]");
    link.cam_in = required<CameraId>(l, "cam_in", "topology.links[]");
    link.zone_in = required<int>(l, "zone_in", "topology.links[]");
    link.t_out_max = required<FrameIndex>(l, "t_out", "topology.links[]");
    link.t_in_min = required<FrameIndex>(l, "t_in", "topology.links[]");
    link.t_low = required<double>(l, "t_low", "topology.links[]");
    link.t_upp = required<double>(l, "t_upp", "topology.links[]");
    if (l.contains("beta_t")) link.beta_t = required<double>(l, "beta_t", "topology.links[]");
    t.links.push_back(link);
  }
  t.validate();
  return t;
}

Fields scenario_fields(ScenarioConfig& c) {
  Fields f("scenario");
  f.add("seed", c.seed)
      .add("cameras", c.cameras)
      .add("frame_width", c.frame_width)
      .add("frame_height", c.frame_height)
      .add("fps", c.fps)
      .add("zone_fraction", c.zone_fraction)
      .add("vehicles", c.vehicles)
      .add("feature_dim", c.feature_dim)
      .add("feature_noise", c.feature_noise)
      .add("camera_shift", c.camera_shift)
      .add("similar_pairs", c.similar_pairs)
      .add("similar_separation", c.similar_separation)
      .add("occlusion_mixing", c.occlusion_mixing)
      .add("speed_min", c.speed_min)
      .add("speed_max", c.speed_max)
      .add("speed_per_camera", c.speed_per_camera)
      .add("box_w", c.box_w)
      .add("box_h", c.box_h)
      .add("size_jitter", c.size_jitter)
      .add("lanes", c.lanes)
      .add("lane_top", c.lane_top)
      .add("lane_spacing", c.lane_spacing)
      .add("shuffle_lanes", c.shuffle_lanes)
      .add("lead_in", c.lead_in)
      .add("spawn_gap_min", c.spawn_gap_min)
      .add("spawn_gap_max", c.spawn_gap_max)
      .add("travel_min", c.travel_min)
      .add("travel_max", c.travel_max)
      .add("outlier_fraction", c.outlier_fraction)
      .add("stop_fraction", c.stop_fraction)
      .add("stop_min", c.stop_min)
      .add("stop_max", c.stop_max)
      .add("stop_position", c.stop_position)
      .add("stop_ramp", c.stop_ramp)
      .add("stop_occluded", c.stop_occluded)
      .add("occlusion_fraction", c.occlusion_fraction)
      .add("occlusion_span_min", c.occlusion_span_min)
      .add("occlusion_span_max", c.occlusion_span_max)
      .add("occlusion_drop_share", c.occlusion_drop_share)
      .add("split_fraction", c.split_fraction)
      .add("split_min", c.split_min)
      .add("split_max", c.split_max);
  f.custom(
      "occlusions",
      [&c](const Json& j) {
        if (!j.is_array()) throw ConfigError("scenario.occlusions: expected an array");
        c.occlusions.clear();
        for (const Json& e : j) {
          only_keys(e, {"camera", "vehicle", "start", "end", "mode"}, "scenario.occlusions[]");
          OcclusionEvent ev;
          ev.camera = required<CameraId>(e, "camera", "scenario.occlusions[]");
          ev.vehicle = required<int>(e, "vehicle", "scenario.occlusions[]");
          ev.start = required<int>(e, "start", "scenario.occlusions[]");
          ev.end = required<int>(e, "end", "scenario.occlusions[]");
          std::string mode = e.contains("mode") ? required<std::string>(e, "mode", "scenario.occlusions[]") : "drop";
          if (mode == "drop") ev.mode = OcclusionMode::drop;
          else if (mode == "low_score") ev.mode = OcclusionMode::low_score;
          else throw ConfigError("scenario.occlusions[]: unknown mode '" + mode + "'");
          c.occlusions.push_back(ev);
        }
      },
      [&c] {
        Json a = Json::array();
        for (const OcclusionEvent& e : c.occlusions)
          a.push_back({{"camera", e.camera}, {"vehicle", e.vehicle}, {"start", e.start}, {"end", e.end},
                       {"mode", e.mode == OcclusionMode::drop ? "drop" : "low_score"}});
        return a;
      });
  f.add("low_conf_onset", c.low_conf_onset)
      .add("score_mean", c.score_mean)
      .add("score_jitter", c.score_jitter)
      .add("low_band_min", c.low_band_min)
      .add("low_band_max", c.low_band_max)
      .add("box_jitter", c.box_jitter)
      .add("decoys", c.decoys)
      .add("tail", c.tail);
  return f;
}

}  // namespace

void RunConfig::validate() const {
  tracker.validate();
  ica.validate();
  topology.validate();
  if (!(iou_min > 0.0 && iou_min <= 1.0)) throw ConfigError("iou_min must lie in (0, 1]");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
}

std::string topology_to_json(const CameraTopology& t) { return topology_json(t).dump(2) + "\n"; }

CameraTopology topology_from_json(const std::string& text) { return topology_parse(parse(text)); }

std::string scenario_to_json(const ScenarioConfig& c) {
  ScenarioConfig copy = c;
  return scenario_fields(copy).write().dump(2) + "\n";
}

ScenarioConfig scenario_from_json(const std::string& text) {
  ScenarioConfig c;
  scenario_fields(c).read(parse(text));
  c.validate();
  return c;
}

RunConfig run_config_from_json(const std::string& text, const std::filesystem::path& base) {
  Json j = parse(text);
  only_keys(j, {"tracker", "ica", "topology", "input", "output", "iou_min", "jobs"}, "run");
  RunConfig rc;
  if (j.contains("tracker")) tracker_fields(rc.tracker).read(j["tracker"]);
  if (j.contains("ica")) ica_fields(rc.ica).read(j["ica"]);
  auto resolve = [&](const char* key) {
    std::filesystem::path p = required<std::string>(j, key, "run");
    return p.is_absolute() || base.empty() ? p : base / p;
  };
  if (j.contains("input")) {
    rc.input = resolve("input");
    if (!std::filesystem::is_directory(rc.input)) throw ConfigError("run.input: no such directory " + rc.input.string());
  }
  if (j.contains("output")) rc.output = resolve("output");
  if (j.contains("topology")) {
    std::filesystem::path p = resolve("topology");
    if (!std::filesystem::is_regular_file(p)) throw ConfigError("run.topology: no such file " + p.string());
    rc.topology = topology_from_json(read_text(p));
  }
  if (j.contains("iou_min")) rc.iou_min = required<double>(j, "iou_min", "run");
  if (j.contains("jobs")) rc.jobs = required<int>(j, "jobs", "run");
  rc.tracker.validate();
  rc.ica.validate();
  rc.topology.validate();
  if (!(rc.iou_min > 0.0 && rc.iou_min <= 1.0)) throw ConfigError("run.iou_min must lie in (0, 1]");
  if (rc.jobs < 1) throw ConfigError("run.jobs must be >= 1");
  return rc;
}

std::string run_config_to_json(const RunConfig& c) {
  RunConfig copy = c;
  Json j = Json::object();
  j["tracker"] = tracker_fields(copy.tracker).write();
  j["ica"] = ica_fields(copy.ica).write();
  j["iou_min"] = c.iou_min;
  j["jobs"] = c.jobs;
  return j.dump(2) + "\n";
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return run_config_from_json(read_text(path), path.parent_path());
}

}  // namespace mcmt::harness
