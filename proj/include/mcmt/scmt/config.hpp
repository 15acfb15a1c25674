#pragma once

#include "mcmt/motion/kalman.hpp"

namespace mcmt::scmt {

struct TrackerConfig {
  double high_score = 0.6;
  double low_score = 0.1;
  // stage-1 pairs with appearance distance above this are rejected
  double appearance_reject = 0.45;
  int max_lost = 30;
  double ema_momentum = 0.9;
  double appearance_weight = 0.75;

  // Trajectory re-link
  double relink_threshold = 0.4;
  int relink_max_gap = 60;
  double relink_spatial_gate = 3.0;  // in box diagonals
  int relink_feature_window = 10;
  double border_margin = 0.05;       // fraction of the frame size

  // Stationary handling
  int stationary_window = 10;
  double stationary_eps = 0.1;
  int stationary_max_hold = 150;     // frames a frozen track is kept alive without detections

  // Bidirectional merge
  double bidirectional_iou = 0.7;

  bool use_ssa = true;
  bool use_trl = true;
  bool use_bt = true;

  motion::KalmanConfig kalman;

  // Throws ConfigError on out-of-range values.
  void validate() const;
};

}  // namespace mcmt::scmt
