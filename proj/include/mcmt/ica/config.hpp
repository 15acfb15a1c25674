#pragma once

namespace mcmt::ica {

enum class Granularity { tracklet, box };
enum class Matcher { hungarian, k_reciprocal };

struct IcaConfig {
  int k_mean = 5;              // smallest pairwise distances averaged for the tracklet distance
  double alpha_penalty = 2.0;  // out-of-window multiplier for the tracklet-grained matrix
  double alpha_t = 1.0;
  double beta_t = 0.0;         // <= 0: use each link's own travel scale
  double alpha_o = 1.1;
  double r_thre = 0.6;
  int k_reciprocal = 7;
  int rerank_k1 = 20;
  int rerank_k2 = 6;
  double rerank_lambda = 0.3;
  int min_votes = 3;
  double hungarian_threshold = 0.5;  // tracklet-grained assignment only

  Granularity granularity = Granularity::box;
  Matcher matcher = Matcher::k_reciprocal;
  bool use_rerank = true;
  bool use_time_refine = true;
  bool use_occlusion_refine = true;
  // Give global ids to tracklets that were never matched across cameras.
  bool include_single_camera = false;

  void validate() const;
};

}  // namespace mcmt::ica
