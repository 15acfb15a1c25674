#include "mcmt/ica/distance.hpp"

#include <algorithm>
#include <cmath>

#include "mcmt/core/errors.hpp"
#include "mcmt/core/feature.hpp"

namespace mcmt::ica {

namespace {

// Unit-normalized box features of all tracklets stacked row-wise.
Eigen::MatrixXd stack_features(const std::vector<Tracklet>& tracks) {
  std::size_t rows = 0, dim = 0;
  for (const auto& t : tracks) {
    rows += t.length();
    if (!t.boxes.empty()) dim = t.boxes.front().feature.dim();
  }
  Eigen::MatrixXd m(rows, dim);
  Eigen::Index r = 0;
  for (const auto& t : tracks)
    for (const auto& b : t.boxes) {
      if (b.feature.dim() != dim) throw UsageError("feature dimension mismatch in pool");
      const double n = b.feature.norm();
      if (n == 0.0) throw UsageError("zero feature in pool");
      for (std::size_t c = 0; c < dim; ++c) m(r, Eigen::Index(c)) = b.feature[c] / n;
      ++r;
    }
  return m;
}

Eigen::MatrixXd cosine_matrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd d = (1.0 - (a * b.transpose()).array()).matrix();
  return d.cwiseMax(0.0).cwiseMin(2.0);
}

std::vector<BoxRef> box_refs(const std::vector<Tracklet>& tracks) {
  std::vector<BoxRef> refs;
  for (std::size_t i = 0; i < tracks.size(); ++i)
    for (std::size_t b = 0; b < tracks[i].length(); ++b) refs.push_back({int(i), int(b)});
  return refs;
}

double beta_for(const PoolPair& pool, const IcaConfig& cfg) {
  return cfg.beta_t > 0.0 ? cfg.beta_t : pool.link.travel_scale();
}

}  // namespace

double tracklet_distance(const Tracklet& a, const Tracklet& b, int k_mean) {
  if (a.boxes.empty() || b.boxes.empty()) throw UsageError("tracklet distance of an empty tracklet");
  std::vector<double> d;
  d.reserve(a.length() * b.length());
  for (const auto& x : a.boxes)
    for (const auto& y : b.boxes) d.push_back(cosine_distance(x.feature, y.feature));
  const std::size_t k = std::min<std::size_t>(std::size_t(std::max(k_mean, 1)), d.size());
  std::nth_element(d.begin(), d.begin() + (k - 1), d.end());
  std::sort(d.begin(), d.begin() + k);
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) s += d[i];
  return s / double(k);
}

double window_penalty(double t, double t_low, double t_upp, double alpha) {
  return (t <= t_low || t >= t_upp) ? alpha : 1.0;
}

DistanceMatrix build_tracklet_matrix(const PoolPair& pool, const IcaConfig& cfg) {
  DistanceMatrix d;
  d.granularity = Granularity::tracklet;
  const auto n = Eigen::Index(pool.exiting.size());
  const auto m = Eigen::Index(pool.entering.size());
  d.values.resize(n, m);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < m; ++j) {
      const double base = tracklet_distance(pool.exiting[i], pool.entering[j], cfg.k_mean);
      d.values(i, j) = base * window_penalty(pool.travel_time(i, j), pool.link.t_low,
                                             pool.link.t_upp, cfg.alpha_penalty);
    }
  for (Eigen::Index i = 0; i < n; ++i) d.row_map.push_back({int(i), -1});
  for (Eigen::Index j = 0; j < m; ++j) d.col_map.push_back({int(j), -1});
  return d;
}

DistanceMatrix build_box_matrix(const PoolPair& pool) {
  DistanceMatrix d;
  d.granularity = Granularity::box;
  d.row_map = box_refs(pool.exiting);
  d.col_map = box_refs(pool.entering);
  if (d.row_map.empty() || d.col_map.empty()) {
    d.values.resize(Eigen::Index(d.row_map.size()), Eigen::Index(d.col_map.size()));
    return d;
  }
  d.values = cosine_matrix(stack_features(pool.exiting), stack_features(pool.entering));
  return d;
}

Eigen::MatrixXd self_distances(const std::vector<Tracklet>& tracks) {
  const Eigen::MatrixXd f = stack_features(tracks);
  Eigen::MatrixXd d = cosine_matrix(f, f);
  d.diagonal().setZero();
  return d;
}

double time_multiplier(double t, double t_low, double t_upp, double alpha_t, double beta_t) {
  if (t < t_low) return std::exp(alpha_t * (t_low - t) / beta_t);
  if (t > t_upp) return std::exp(alpha_t * (t - t_upp) / beta_t);
  return 1.0;
}

double occlusion_multiplier(double r, double alpha_o, double r_thre) {
  return r > r_thre ? std::exp(alpha_o * (1.0 + r)) : 1.0;
}

DistanceMatrix refine_time(DistanceMatrix d, const PoolPair& pool, const IcaConfig& cfg) {
  const double beta = beta_for(pool, cfg);
  for (Eigen::Index r = 0; r < d.rows(); ++r)
    for (Eigen::Index c = 0; c < d.cols(); ++c) {
      const double t = pool.travel_time(std::size_t(d.row_map[r].tracklet),
                                        std::size_t(d.col_map[c].tracklet));
      d.values(r, c) *= time_multiplier(t, pool.link.t_low, pool.link.t_upp, cfg.alpha_t, beta);
    }
  return d;
}

DistanceMatrix refine_occlusion(DistanceMatrix d, const PoolPair& pool, const IcaConfig& cfg) {
  if (d.granularity != Granularity::box) return d;
  for (Eigen::Index r = 0; r < d.rows(); ++r) {
    const auto& ref = d.row_map[r];
    const double occ = pool.exiting[ref.tracklet].boxes[ref.box].occlusion;
    const double f = occlusion_multiplier(occ, cfg.alpha_o, cfg.r_thre);
    if (f != 1.0) d.values.row(r) *= f;
  }
  for (Eigen::Index c = 0; c < d.cols(); ++c) {
    const auto& ref = d.col_map[c];
    const double occ = pool.entering[ref.tracklet].boxes[ref.box].occlusion;
    const double f = occlusion_multiplier(occ, cfg.alpha_o, cfg.r_thre);
    if (f != 1.0) d.values.col(c) *= f;
  }
  return d;
}

}  // namespace mcmt::ica
