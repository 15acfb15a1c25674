#pragma once

#include <Eigen/Dense>

#include "mcmt/core/types.hpp"

namespace mcmt::motion {

using Vector8 = Eigen::Matrix<double, 8, 1>;
using Matrix8 = Eigen::Matrix<double, 8, 8>;
using Vector4 = Eigen::Matrix<double, 4, 1>;
using Matrix4 = Eigen::Matrix<double, 4, 4>;

struct KalmanConfig {
  // Noise standard deviations are these weights times the box height.
  double std_weight_position = 1.0 / 20.0;
  double std_weight_velocity = 1.0 / 160.0;
  // Relative inflation of the innovation covariance diagonal in the smoothed distance.
  double smoothing = 0.2;
  // chi-square 0.95 quantile, 4 degrees of freedom
  double gate_threshold = 9.4877;
  // Lower bound on (1 - score) so a perfect-confidence update stays well posed.
  double min_noise_scale = 1e-12;
};

// State (cx, cy, a, h, vcx, vcy, va, vh) with a = w / h.
struct MotionState {
  Vector8 mean = Vector8::Zero();
  Matrix8 covariance = Matrix8::Identity();
  int age = 0;   // frames since the last update
  int hits = 0;  // consecutive updates
};

Vector4 to_measurement(const Rect& r);
Rect to_rect(const Vector8& mean);

MotionState initiate(const Rect& r, const KalmanConfig& cfg = {});
MotionState predict(const MotionState& s, const KalmanConfig& cfg = {});
// Confidence-scaled update: measurement noise is (1 - score) * R.
MotionState update(const MotionState& s, const DetBox& z, const KalmanConfig& cfg = {});
// Squared Mahalanobis distance of `z` under the (smoothed) predicted measurement density.
double mahalanobis(const MotionState& s, const DetBox& z, const KalmanConfig& cfg = {});
bool gate(const MotionState& s, const DetBox& z, double threshold, const KalmanConfig& cfg = {});

// Generic linear-Gaussian pieces the filter is built from; exposed for small-dimension checks.
struct Gaussian {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

Gaussian kalman_correct(const Gaussian& prior, const Eigen::MatrixXd& observation,
                        const Eigen::MatrixXd& noise, const Eigen::VectorXd& z);

double squared_mahalanobis(const Eigen::VectorXd& innovation, const Eigen::MatrixXd& covariance);

// S' = S + smoothing * diag(S)
Eigen::MatrixXd smooth_covariance(const Eigen::MatrixXd& s, double smoothing);

}  // namespace mcmt::motion
