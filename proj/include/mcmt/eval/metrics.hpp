#pragma once

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "mcmt/core/types.hpp"

namespace mcmt::eval {

struct Observation {
  int id = 0;
  Rect rect;
  // Ground-truth boxes of fully occluded objects are kept but not scored.
  bool visible = true;
};

using FrameKey = std::pair<CameraId, FrameIndex>;

// Boxes with identities, grouped by (camera, frame). Used for both ground truth and output.
struct Sequence {
  std::map<FrameKey, std::vector<Observation>> frames;

  void add(CameraId camera, FrameIndex frame, Observation obs) {
    frames[{camera, frame}].push_back(obs);
  }
  std::size_t box_count() const;
};

struct MetricReport {
  double idf1 = 0.0;
  double idp = 0.0;
  double idr = 0.0;
  double mota = 0.0;
  long idsw = 0;
  long fp = 0;
  long fn = 0;
  long gt_count = 0;
  long pred_count = 0;
  long idtp = 0;
  long idfp = 0;
  long idfn = 0;
};

struct FrameMatch {
  int gt = 0;    // index into the frame's gt list
  int pred = 0;  // index into the frame's prediction list
  friend bool operator==(const FrameMatch&, const FrameMatch&) = default;
};

// One-to-one matching of ground truth to predictions with iou >= iou_min. Pairs that
// continue `previous` (gt id -> pred id) are kept first; the rest maximize the number of
// matches, then the total iou.
std::vector<FrameMatch> match_frame(std::span<const Observation> gt, std::span<const Observation> pred,
                                    double iou_min, const std::map<int, int>* previous = nullptr);

// Removes invisible ground truth, and predictions that only cover invisible ground truth.
std::pair<Sequence, Sequence> drop_invisible(const Sequence& gt, const Sequence& pred, double iou_min);

struct IdentityCounts {
  long idtp = 0;
  long gt_count = 0;
  long pred_count = 0;
};

// Number of frames where gt id g and pred id p overlap with iou >= iou_min.
std::map<std::pair<int, int>, long> co_occurrence(const Sequence& gt, const Sequence& pred,
                                                  double iou_min);

IdentityCounts identity_counts(const Sequence& gt, const Sequence& pred, double iou_min = 0.5);

// IDF1 / IDP / IDR under the optimal one-to-one identity mapping.
MetricReport identity_metrics(const Sequence& gt, const Sequence& pred, double iou_min = 0.5);

// MOTA / IDSW / FP / FN. Throws UndefinedMetricError when there is no visible ground truth.
MetricReport clear_metrics(const Sequence& gt, const Sequence& pred, double iou_min = 0.5);

// Both metric families after dropping invisible ground truth.
MetricReport evaluate(const Sequence& gt, const Sequence& pred, double iou_min = 0.5);

}  // namespace mcmt::eval
