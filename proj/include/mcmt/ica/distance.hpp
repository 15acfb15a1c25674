#pragma once

#include <vector>

#include <Eigen/Core>

#include "mcmt/core/types.hpp"
#include "mcmt/ica/config.hpp"
#include "mcmt/ica/pool.hpp"

namespace mcmt::ica {

struct BoxRef {
  int tracklet = 0;
  int box = -1;  // -1 for tracklet-grained rows/columns
  friend bool operator==(const BoxRef&, const BoxRef&) = default;
};

struct DistanceMatrix {
  Eigen::MatrixXd values;
  std::vector<BoxRef> row_map;
  std::vector<BoxRef> col_map;
  Granularity granularity = Granularity::tracklet;

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }
};

// Mean of the min(k, l_i * l_j) smallest box-to-box cosine distances.
double tracklet_distance(const Tracklet& a, const Tracklet& b, int k_mean);

// Out-of-window multiplier of the tracklet-grained matrix: `alpha` when t <= t_low or
// t >= t_upp, 1 otherwise.
double window_penalty(double travel_time, double t_low, double t_upp, double alpha);

// n x m matrix of tracklet distances with the travel-window penalty applied.
DistanceMatrix build_tracklet_matrix(const PoolPair& pool, const IcaConfig& cfg);

// (sum l_i) x (sum l_j) matrix of box cosine distances, rows/columns in tracklet-then-box order.
DistanceMatrix build_box_matrix(const PoolPair& pool);

// Box-to-box distances within one side of the pool (probe-probe or gallery-gallery).
Eigen::MatrixXd self_distances(const std::vector<Tracklet>& tracks);

// exp(alpha_t * (t_low - t) / beta_t) below the window, exp(alpha_t * (t - t_upp) / beta_t)
// above it, 1 inside.
double time_multiplier(double travel_time, double t_low, double t_upp, double alpha_t,
                       double beta_t);

// exp(alpha_o * (1 + r)) when r > r_thre, else 1.
double occlusion_multiplier(double r, double alpha_o, double r_thre);

DistanceMatrix refine_time(DistanceMatrix d, const PoolPair& pool, const IcaConfig& cfg);
DistanceMatrix refine_occlusion(DistanceMatrix d, const PoolPair& pool, const IcaConfig& cfg);

}  // namespace mcmt::ica
