#include "mcmt/scmt/config.hpp"

#include "mcmt/core/errors.hpp"

namespace mcmt::scmt {

void TrackerConfig::validate() const {
  if (!(low_score >= 0.0 && low_score < high_score && high_score <= 1.0))
    throw ConfigError("tracker needs 0 <= low_score < high_score <= 1");
  if (max_lost < 0) throw ConfigError("max_lost must be >= 0");
  if (!(ema_momentum > 0.0 && ema_momentum < 1.0)) throw ConfigError("ema_momentum must be in (0,1)");
  if (!(appearance_weight >= 0.0 && appearance_weight <= 1.0))
    throw ConfigError("appearance_weight must be in [0,1]");
  if (appearance_reject < 0.0 || relink_threshold < 0.0)
    throw ConfigError("distance thresholds must be non-negative");
  if (stationary_window < 2) throw ConfigError("stationary_window must be >= 2");
  if (stationary_eps < 0.0) throw ConfigError("stationary_eps must be non-negative");
  if (relink_max_gap < 1 || relink_feature_window < 1)
    throw ConfigError("relink_max_gap and relink_feature_window must be >= 1");
  if (border_margin < 0.0 || border_margin >= 0.5) throw ConfigError("border_margin must be in [0,0.5)");
  if (!(bidirectional_iou > 0.0 && bidirectional_iou <= 1.0))
    throw ConfigError("bidirectional_iou must be in (0,1]");
  if (kalman.gate_threshold <= 0.0 || kalman.smoothing < 0.0)
    throw ConfigError("kalman gate must be > 0 and smoothing >= 0");
}

}  // namespace mcmt::scmt
