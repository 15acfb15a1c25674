#include "mcmt/eval/metrics.hpp"

#include <algorithm>
#include <set>

#include <Eigen/Core>

#include "mcmt/assign/hungarian.hpp"
#include "mcmt/core/errors.hpp"
#include "mcmt/core/geometry.hpp"

namespace mcmt::eval {

std::size_t Sequence::box_count() const {
  std::size_t n = 0;
  for (const auto& [k, v] : frames) n += v.size();
  return n;
}

std::vector<FrameMatch> match_frame(std::span<const Observation> gt, std::span<const Observation> pred,
                                    double iou_min, const std::map<int, int>* previous) {
  std::vector<FrameMatch> out;
  std::vector<char> gt_used(gt.size(), 0), pred_used(pred.size(), 0);
  if (previous) {
    for (std::size_t g = 0; g < gt.size(); ++g) {
      const auto it = previous->find(gt[g].id);
      if (it == previous->end()) continue;
      for (std::size_t p = 0; p < pred.size(); ++p) {
        if (pred_used[p] || pred[p].id != it->second) continue;
        if (iou(gt[g].rect, pred[p].rect) >= iou_min) {
          out.push_back({int(g), int(p)});
          gt_used[g] = pred_used[p] = 1;
        }
        break;
      }
    }
  }
  std::vector<int> gi, pi;
  for (std::size_t g = 0; g < gt.size(); ++g)
    if (!gt_used[g]) gi.push_back(int(g));
  for (std::size_t p = 0; p < pred.size(); ++p)
    if (!pred_used[p]) pi.push_back(int(p));
  if (!gi.empty() && !pi.empty()) {
    Eigen::MatrixXd cost(gi.size(), pi.size());
    for (std::size_t a = 0; a < gi.size(); ++a)
      for (std::size_t b = 0; b < pi.size(); ++b) {
        const double v = iou(gt[gi[a]].rect, pred[pi[b]].rect);
        cost(a, b) = v >= iou_min ? 1.0 - v : kForbidden;
      }
    for (const auto& m : solve_assignment(cost)) out.push_back({gi[m.row], pi[m.col]});
  }
  std::sort(out.begin(), out.end(), [](const FrameMatch& a, const FrameMatch& b) { return a.gt < b.gt; });
  return out;
}

std::pair<Sequence, Sequence> drop_invisible(const Sequence& gt, const Sequence& pred, double iou_min) {
  Sequence g_out, p_out;
  std::set<FrameKey> keys;
  for (const auto& [k, v] : gt.frames) keys.insert(k);
  for (const auto& [k, v] : pred.frames) keys.insert(k);
  static const std::vector<Observation> none;
  for (const auto& key : keys) {
    const auto gi = gt.frames.find(key);
    const auto pi = pred.frames.find(key);
    const auto& gv = gi == gt.frames.end() ? none : gi->second;
    const auto& pv = pi == pred.frames.end() ? none : pi->second;
    std::vector<Observation> visible, hidden;
    for (const auto& o : gv) (o.visible ? visible : hidden).push_back(o);
    std::vector<char> keep(pv.size(), 1);
    if (!hidden.empty()) {
      std::vector<char> matched(pv.size(), 0);
      for (const auto& m : match_frame(visible, pv, iou_min)) matched[m.pred] = 1;
      for (std::size_t p = 0; p < pv.size(); ++p) {
        if (matched[p]) continue;
        for (const auto& h : hidden)
          if (iou(h.rect, pv[p].rect) >= iou_min) {
            keep[p] = 0;
            break;
          }
      }
    }
    if (!visible.empty()) g_out.frames[key] = std::move(visible);
    std::vector<Observation> kept;
    for (std::size_t p = 0; p < pv.size(); ++p)
      if (keep[p]) kept.push_back(pv[p]);
    if (!kept.empty()) p_out.frames[key] = std::move(kept);
  }
  return {std::move(g_out), std::move(p_out)};
}

std::map<std::pair<int, int>, long> co_occurrence(const Sequence& gt, const Sequence& pred,
                                                  double iou_min) {
  std::map<std::pair<int, int>, long> counts;
  for (const auto& [key, gv] : gt.frames) {
    const auto it = pred.frames.find(key);
    if (it == pred.frames.end()) continue;
    for (const auto& g : gv)
      for (const auto& p : it->second)
        if (iou(g.rect, p.rect) >= iou_min) ++counts[{g.id, p.id}];
  }
  return counts;
}

IdentityCounts identity_counts(const Sequence& gt, const Sequence& pred, double iou_min) {
  IdentityCounts c;
  c.gt_count = long(gt.box_count());
  c.pred_count = long(pred.box_count());
  const auto co = co_occurrence(gt, pred, iou_min);
  if (co.empty()) return c;

  std::vector<int> gids, pids;
  for (const auto& [k, v] : co) {
    gids.push_back(k.first);
    pids.push_back(k.second);
  }
  std::sort(gids.begin(), gids.end());
  gids.erase(std::unique(gids.begin(), gids.end()), gids.end());
  std::sort(pids.begin(), pids.end());
  pids.erase(std::unique(pids.begin(), pids.end()), pids.end());
  const auto pos = [](const std::vector<int>& v, int id) {
    return Eigen::Index(std::lower_bound(v.begin(), v.end(), id) - v.begin());
  };
  long max_count = 0;
  for (const auto& [k, v] : co) max_count = std::max(max_count, v);
  Eigen::MatrixXd cost = Eigen::MatrixXd::Constant(Eigen::Index(gids.size()),
                                                   Eigen::Index(pids.size()), double(max_count));
  for (const auto& [k, v] : co) cost(pos(gids, k.first), pos(pids, k.second)) = double(max_count - v);
  for (const auto& a : solve_assignment(cost)) {
    const auto it = co.find({gids[a.row], pids[a.col]});
    if (it != co.end()) c.idtp += it->second;
  }
  return c;
}

MetricReport identity_metrics(const Sequence& gt, const Sequence& pred, double iou_min) {
  const auto c = identity_counts(gt, pred, iou_min);
  MetricReport r;
  r.gt_count = c.gt_count;
  r.pred_count = c.pred_count;
  r.idtp = c.idtp;
  r.idfn = c.gt_count - c.idtp;
  r.idfp = c.pred_count - c.idtp;
  r.idp = c.pred_count > 0 ? double(c.idtp) / double(c.pred_count) : 0.0;
  r.idr = c.gt_count > 0 ? double(c.idtp) / double(c.gt_count) : 0.0;
  const long denom = c.gt_count + c.pred_count;
  r.idf1 = denom > 0 ? 2.0 * double(c.idtp) / double(denom) : 0.0;
  return r;
}

MetricReport clear_metrics(const Sequence& gt, const Sequence& pred, double iou_min) {
  MetricReport r;
  r.gt_count = long(gt.box_count());
  r.pred_count = long(pred.box_count());
  if (r.gt_count == 0) throw UndefinedMetricError("MOTA is undefined without ground truth");

  std::set<FrameKey> keys;
  for (const auto& [k, v] : gt.frames) keys.insert(k);
  for (const auto& [k, v] : pred.frames) keys.insert(k);
  static const std::vector<Observation> none;
  std::map<CameraId, std::map<int, int>> last_match;  // per camera: gt id -> pred id

  for (const auto& key : keys) {
    const auto gi = gt.frames.find(key);
    const auto pi = pred.frames.find(key);
    const auto& gv = gi == gt.frames.end() ? none : gi->second;
    const auto& pv = pi == pred.frames.end() ? none : pi->second;
    auto& previous = last_match[key.first];
    const auto m = match_frame(gv, pv, iou_min, &previous);
    for (const auto& fm : m) {
      const int g = gv[fm.gt].id;
      const int p = pv[fm.pred].id;
      const auto it = previous.find(g);
      if (it != previous.end() && it->second != p) ++r.idsw;
      previous[g] = p;
    }
    r.fn += long(gv.size() - m.size());
    r.fp += long(pv.size() - m.size());
  }
  r.mota = 1.0 - double(r.fn + r.fp + r.idsw) / double(r.gt_count);
  return r;
}

MetricReport evaluate(const Sequence& gt, const Sequence& pred, double iou_min) {
  const auto [g, p] = drop_invisible(gt, pred, iou_min);
  MetricReport r = identity_metrics(g, p, iou_min);
  const MetricReport c = clear_metrics(g, p, iou_min);
  r.mota = c.mota;
  r.idsw = c.idsw;
  r.fp = c.fp;
  r.fn = c.fn;
  return r;
}

}  // namespace mcmt::eval
