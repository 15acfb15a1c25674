#include "mcmt/harness/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string_view>

#include "mcmt/core/errors.hpp"
#include "mcmt/harness/config.hpp"

namespace mcmt::harness {
namespace {

std::ifstream open_in(const fs::path& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw UsageError("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) throw UsageError("cannot write " + path.string());
  return out;
}

// Rows of a comma-separated table with a fixed header; blank lines are skipped.
class Table {
 public:
  Table(const fs::path& path, std::string_view header) : path_(path.string()) {
    std::ifstream in = open_in(path);
    std::string line;
    std::size_t n = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
      ++n;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      if (!have_header) {
        if (line != header) throw ParseError(path_ + ": expected header '" + std::string(header) + "'", n);
        have_header = true;
        continue;
      }
      lines_.push_back({n, line});
    }
    columns_ = static_cast<std::size_t>(std::count(header.begin(), header.end(), ',')) + 1;
  }

  std::size_t size() const { return lines_.size(); }
  std::size_t line(std::size_t row) const { return lines_[row].first; }

  std::vector<std::string_view> fields(std::size_t row) const {
    std::string_view s = lines_[row].second;
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
      std::size_t comma = s.find(',', start);
      out.push_back(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (out.size() != columns_)
      throw ParseError(path_ + ": expected " + std::to_string(columns_) + " fields", line(row));
    return out;
  }

  template <class T>
  T parse(std::string_view s, std::size_t row, const char* name) const {
    T v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw ParseError(path_ + ": bad " + std::string(name) + " '" + std::string(s) + "'", line(row));
    if constexpr (std::is_floating_point_v<T>) {
      if (!std::isfinite(v)) throw ParseError(path_ + ": non-finite " + std::string(name), line(row));
    }
    return v;
  }

  Rect rect(const std::vector<std::string_view>& f, std::size_t first, std::size_t row) const {
    Rect r{parse<double>(f[first], row, "x"), parse<double>(f[first + 1], row, "y"),
           parse<double>(f[first + 2], row, "w"), parse<double>(f[first + 3], row, "h")};
    if (!(r.w > 0.0) || !(r.h > 0.0)) throw ParseError(path_ + ": box size must be positive", line(row));
    return r;
  }

  FrameIndex frame(std::string_view s, std::size_t row) const {
    FrameIndex f = parse<FrameIndex>(s, row, "frame");
    if (f < 0) throw ParseError(path_ + ": negative frame", line(row));
    return f;
  }

  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::vector<std::pair<std::size_t, std::string>> lines_;
  std::size_t columns_ = 0;
};

void put_u32(std::ostream& out, std::uint32_t v) {
  std::array<char, 4> b{};
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(b.data(), 4);
}

std::uint32_t get_u32(const unsigned char* p) {
  return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 | std::uint32_t(p[3]) << 24;
}

void put_rect(std::ostream& out, const Rect& r) {
  out << format_number(r.x) << ',' << format_number(r.y) << ',' << format_number(r.w) << ','
      << format_number(r.h);
}

}  // namespace

std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out = open_out(path, std::ios::binary);
  out << text;
}

std::string read_text(const fs::path& path) {
  std::ifstream in = open_in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_feature_matrix(const fs::path& path, const std::vector<const Feature*>& rows) {
  std::uint32_t dim = rows.empty() ? 0 : static_cast<std::uint32_t>(rows.front()->dim());
  for (const Feature* f : rows)
    if (f->dim() != dim) throw IntegrityError(path.string() + ": features of mixed dimension");
  std::ofstream out = open_out(path, std::ios::binary);
  put_u32(out, static_cast<std::uint32_t>(rows.size()));
  put_u32(out, dim);
  for (const Feature* f : rows)
    for (float x : f->values()) put_u32(out, std::bit_cast<std::uint32_t>(x));
}

std::vector<Feature> read_feature_matrix(const fs::path& path) {
  std::string bytes = read_text(path);
  if (bytes.size() < 8) throw IntegrityError(path.string() + ": truncated feature header");
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  std::uint64_t rows = get_u32(p), dim = get_u32(p + 4);
  if (bytes.size() != 8 + rows * dim * 4)
    throw IntegrityError(path.string() + ": feature payload does not match its header");
  std::vector<Feature> out;
  out.reserve(rows);
  for (std::uint64_t r = 0; r < rows; ++r) {
    std::vector<float> v(dim);
    for (std::uint64_t i = 0; i < dim; ++i) {
      v[i] = std::bit_cast<float>(get_u32(p + 8 + 4 * (r * dim + i)));
      if (!std::isfinite(v[i])) throw IntegrityError(path.string() + ": non-finite feature value in row " + std::to_string(r));
    }
    out.emplace_back(std::move(v));
  }
  return out;
}

void write_detections(const fs::path& csv, const fs::path& features, const scmt::FrameList& frames) {
  std::ofstream out = open_out(csv);
  out << "frame,det_id,x,y,w,h,score\n";
  std::vector<const Feature*> rows;
  for (const auto& dets : frames)
    for (const DetBox& d : dets) {
      out << d.frame << ',' << d.det_id << ',';
      put_rect(out, d.rect);
      out << ',' << format_number(d.score) << '\n';
      rows.push_back(&d.feature);
    }
  write_feature_matrix(features, rows);
}

scmt::FrameList load_detections(const fs::path& csv, const fs::path& features) {
  Table table(csv, "frame,det_id,x,y,w,h,score");
  std::vector<Feature> feats = read_feature_matrix(features);
  if (feats.size() != table.size())
    throw IntegrityError(csv.string() + ": " + std::to_string(table.size()) + " rows but " +
                         std::to_string(feats.size()) + " feature rows");
  scmt::FrameList frames;
  std::set<std::pair<FrameIndex, int>> seen;
  for (std::size_t r = 0; r < table.size(); ++r) {
    auto f = table.fields(r);
    DetBox d;
    d.frame = table.frame(f[0], r);
    d.det_id = table.parse<int>(f[1], r, "det_id");
    d.rect = table.rect(f, 2, r);
    d.score = table.parse<double>(f[6], r, "score");
    d.feature = std::move(feats[r]);
    if (!seen.insert({d.frame, d.det_id}).second)
      throw IntegrityError(csv.string() + ": duplicate (frame, det_id) at line " + std::to_string(table.line(r)));
    if (frames.size() <= static_cast<std::size_t>(d.frame)) frames.resize(d.frame + 1);
    frames[d.frame].push_back(std::move(d));
  }
  return frames;
}

void write_tracks(const fs::path& csv, const fs::path& features, const std::vector<Tracklet>& tracks) {
  std::vector<const Tracklet*> order;
  for (const Tracklet& t : tracks) order.push_back(&t);
  std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->track_id < b->track_id; });
  std::ofstream out = open_out(csv);
  out << "frame,track_id,x,y,w,h,score,interp\n";
  std::vector<const Feature*> rows;
  for (const Tracklet* t : order)
    for (const DetBox& b : t->boxes) {
      out << b.frame << ',' << t->track_id << ',';
      put_rect(out, b.rect);
      out << ',' << format_number(b.score) << ',' << (b.interp ? 1 : 0) << '\n';
      rows.push_back(&b.feature);
    }
  write_feature_matrix(features, rows);
}

std::vector<Tracklet> load_tracks(const fs::path& csv, const fs::path& features, CameraId camera) {
  Table table(csv, "frame,track_id,x,y,w,h,score,interp");
  std::vector<Feature> feats = read_feature_matrix(features);
  if (feats.size() != table.size())
    throw IntegrityError(csv.string() + ": " + std::to_string(table.size()) + " rows but " +
                         std::to_string(feats.size()) + " feature rows");
  std::map<TrackId, Tracklet> by_id;
  for (std::size_t r = 0; r < table.size(); ++r) {
    auto f = table.fields(r);
    DetBox b;
    b.frame = table.frame(f[0], r);
    TrackId id = table.parse<TrackId>(f[1], r, "track_id");
    b.rect = table.rect(f, 2, r);
    b.score = table.parse<double>(f[6], r, "score");
    int interp = table.parse<int>(f[7], r, "interp");
    if (interp != 0 && interp != 1) throw ParseError(csv.string() + ": interp must be 0 or 1", table.line(r));
    b.interp = interp == 1;
    b.det_id = b.interp ? -1 : 0;
    b.feature = std::move(feats[r]);
    Tracklet& t = by_id[id];
    t.track_id = id;
    t.camera_id = camera;
    if (!t.boxes.empty() && t.boxes.back().frame >= b.frame)
      throw IntegrityError(csv.string() + ": frames of track " + std::to_string(id) + " not increasing at line " +
                           std::to_string(table.line(r)));
    t.boxes.push_back(std::move(b));
  }
  std::vector<Tracklet> out;
  for (auto& [id, t] : by_id) out.push_back(std::move(t));
  return out;
}

void write_global(const fs::path& csv, const ica::GlobalAssignment& global) {
  std::ofstream out = open_out(csv);
  out << "camera_id,track_id,global_id\n";
  for (const auto& [key, gid] : global.global_ids) out << key.camera << ',' << key.track << ',' << gid << '\n';
}

std::map<ica::TrackletKey, int> load_global(const fs::path& csv) {
  Table table(csv, "camera_id,track_id,global_id");
  std::map<ica::TrackletKey, int> out;
  for (std::size_t r = 0; r < table.size(); ++r) {
    auto f = table.fields(r);
    ica::TrackletKey k{table.parse<CameraId>(f[0], r, "camera_id"), table.parse<TrackId>(f[1], r, "track_id")};
    if (!out.emplace(k, table.parse<int>(f[2], r, "global_id")).second)
      throw IntegrityError(csv.string() + ": duplicate tracklet at line " + std::to_string(table.line(r)));
  }
  return out;
}

void write_ground_truth(const fs::path& csv, const std::vector<GtBox>& gt) {
  std::ofstream out = open_out(csv);
  out << "frame,id,x,y,w,h,visible\n";
  for (const GtBox& g : gt) {
    out << g.frame << ',' << g.id << ',';
    put_rect(out, g.rect);
    out << ',' << (g.visible ? 1 : 0) << '\n';
  }
}

std::vector<GtBox> load_ground_truth(const fs::path& csv) {
  Table table(csv, "frame,id,x,y,w,h,visible");
  std::vector<GtBox> out;
  for (std::size_t r = 0; r < table.size(); ++r) {
    auto f = table.fields(r);
    GtBox g;
    g.frame = table.frame(f[0], r);
    g.id = table.parse<int>(f[1], r, "id");
    g.rect = table.rect(f, 2, r);
    int vis = table.parse<int>(f[6], r, "visible");
    if (vis != 0 && vis != 1) throw ParseError(csv.string() + ": visible must be 0 or 1", table.line(r));
    g.visible = vis == 1;
    out.push_back(g);
  }
  return out;
}

void write_scenario(const fs::path& dir, const Scenario& sc) {
  fs::create_directories(dir);
  write_text(Layout::topology(dir), topology_to_json(sc.topology));
  write_text(Layout::scenario(dir), scenario_to_json(sc.config));
  for (const auto& [cam, frames] : sc.detections)
    write_detections(Layout::detections(dir, cam), Layout::det_features(dir, cam), frames);
  for (const auto& [cam, gt] : sc.ground_truth) write_ground_truth(Layout::ground_truth(dir, cam), gt);
}

}  // namespace mcmt::harness
