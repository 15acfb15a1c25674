#include "mcmt/harness/ablation.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "mcmt/core/errors.hpp"
#include "mcmt/harness/io.hpp"
#include "mcmt/harness/pipeline.hpp"
#include "mcmt/harness/scenario.hpp"

namespace mcmt::harness {
namespace {

std::string fixed(double v, int digits) {
  std::ostringstream ss;
  ss.setf(std::ios::fixed);
  ss.precision(digits);
  ss << v;
  return ss.str();
}

}  // namespace

double AblationRow::mean(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double AblationRow::standard_error(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = mean(v), ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1)) / std::sqrt(static_cast<double>(v.size()));
}

const AblationRow& AblationTable::row(const std::string& name) const {
  for (const AblationRow& r : rows)
    if (r.name == name) return r;
  throw UsageError("no ablation row named " + name);
}

std::string AblationTable::to_text() const {
  std::size_t width = 10;
  for (const AblationRow& r : rows) width = std::max(width, r.name.size());
  std::ostringstream ss;
  ss << title << " (" << preset << ", " << seeds.size() << " seeds)\n";
  ss << std::string(width, ' ') << "   IDF1           MOTA     IDSW\n";
  for (const AblationRow& r : rows) {
    ss << r.name << std::string(width - r.name.size(), ' ') << "   " << fixed(100.0 * AblationRow::mean(r.idf1), 2)
       << " +- " << fixed(100.0 * AblationRow::standard_error(r.idf1), 2) << "   "
       << fixed(100.0 * AblationRow::mean(r.mota), 2) << "   " << fixed(AblationRow::mean(r.idsw), 2) << "\n";
  }
  return ss.str();
}

std::string AblationTable::to_csv() const {
  std::ostringstream ss;
  ss << "row,seed,idf1,mota,idsw\n";
  for (const AblationRow& r : rows)
    for (std::size_t i = 0; i < seeds.size(); ++i)
      ss << r.name << ',' << seeds[i] << ',' << format_number(r.idf1[i]) << ',' << format_number(r.mota[i]) << ','
         << format_number(r.idsw[i]) << '\n';
  return ss.str();
}

std::vector<NamedTracker> strategy_grid() {
  std::vector<NamedTracker> g;
  auto make = [](bool ssa, bool trl, bool bt) {
    scmt::TrackerConfig c;
    c.use_ssa = ssa;
    c.use_trl = trl;
    c.use_bt = bt;
    return c;
  };
  g.push_back({"baseline", make(false, false, false)});
  g.push_back({"+SSA", make(true, false, false)});
  g.push_back({"+SSA+TRL", make(true, true, false)});
  g.push_back({"+SSA+TRL+BT", make(true, true, true)});
  return g;
}

std::vector<NamedIca> matching_grid() {
  std::vector<NamedIca> g;
  for (auto gran : {ica::Granularity::tracklet, ica::Granularity::box})
    for (auto m : {ica::Matcher::hungarian, ica::Matcher::k_reciprocal}) {
      ica::IcaConfig c;
      c.granularity = gran;
      c.matcher = m;
      std::string name = std::string(gran == ica::Granularity::box ? "box" : "tracklet") + "+" +
                         (m == ica::Matcher::hungarian ? "hungarian" : "k_reciprocal");
      g.push_back({name, c});
    }
  return g;
}

std::vector<NamedIca> k_grid(const std::vector<int>& ks) {
  std::vector<NamedIca> g;
  for (int k : ks) {
    ica::IcaConfig c;
    c.k_reciprocal = k;
    g.push_back({"k=" + std::to_string(k), c});
  }
  return g;
}

std::vector<std::uint64_t> seed_range(std::uint64_t first, int count) {
  std::vector<std::uint64_t> s;
  for (int i = 0; i < count; ++i) s.push_back(first + static_cast<std::uint64_t>(i));
  return s;
}

AblationTable ablate_tracking(const std::string& preset_name, const std::vector<std::uint64_t>& seeds,
                              const std::vector<NamedTracker>& rows, int jobs) {
  AblationTable table{"single-camera tracking", preset_name, seeds, {}};
  std::vector<std::vector<eval::MetricReport>> res(seeds.size(), std::vector<eval::MetricReport>(rows.size()));
  parallel_for(seeds.size(), jobs, [&](std::size_t s) {
    Scenario sc = generate_scenario(preset(preset_name, seeds[s]));
    for (std::size_t r = 0; r < rows.size(); ++r)
      res[s][r] = evaluate_scmt(sc.ground_truth, track_all(sc.topology, sc.detections, rows[r].config));
  });
  for (std::size_t r = 0; r < rows.size(); ++r) {
    AblationRow row{rows[r].name, {}, {}, {}};
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      row.idf1.push_back(res[s][r].idf1);
      row.mota.push_back(res[s][r].mota);
      row.idsw.push_back(static_cast<double>(res[s][r].idsw));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

AblationTable ablate_matching(const std::string& preset_name, const std::vector<std::uint64_t>& seeds,
                              const std::vector<NamedIca>& rows, int jobs) {
  AblationTable table{"inter-camera association", preset_name, seeds, {}};
  std::vector<std::vector<eval::MetricReport>> res(seeds.size(), std::vector<eval::MetricReport>(rows.size()));
  parallel_for(seeds.size(), jobs, [&](std::size_t s) {
    Scenario sc = generate_scenario(preset(preset_name, seeds[s]));
    scmt::TrackerConfig tracker;
    CameraTracks tracks = track_all(sc.topology, sc.detections, tracker);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      McmtResult m{tracks, {}};
      m.global = associate_all(sc.topology, m.tracks, rows[r].config);
      res[s][r] = evaluate_mcmt(sc.ground_truth, m);
    }
  });
  for (std::size_t r = 0; r < rows.size(); ++r) {
    AblationRow row{rows[r].name, {}, {}, {}};
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      row.idf1.push_back(res[s][r].idf1);
      row.mota.push_back(res[s][r].mota);
      row.idsw.push_back(static_cast<double>(res[s][r].idsw));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace mcmt::harness
