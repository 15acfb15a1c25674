#pragma once

#include <Eigen/Core>

namespace mcmt::ica {

struct RerankParams {
  int k1 = 20;
  int k2 = 6;
  double lambda = 0.3;
};

// k-reciprocal re-ranking of a probe x gallery distance matrix. `probe_probe` and
// `gallery_gallery` complete the joint distance over all probe and gallery items. Returns
// lambda * probe_gallery + (1 - lambda) * jaccard, same shape as `probe_gallery`.
Eigen::MatrixXd rerank(const Eigen::MatrixXd& probe_gallery, const Eigen::MatrixXd& probe_probe,
                       const Eigen::MatrixXd& gallery_gallery, const RerankParams& params);

}  // namespace mcmt::ica
