#include "mcmt/motion/kalman.hpp"

#include <algorithm>
#include <cmath>

#include "mcmt/core/errors.hpp"

namespace mcmt::motion {

namespace {

using Matrix48 = Eigen::Matrix<double, 4, 8>;

Matrix8 transition() {
  Matrix8 f = Matrix8::Identity();
  for (int i = 0; i < 4; ++i) f(i, i + 4) = 1.0;
  return f;
}

Matrix48 observation() {
  Matrix48 h = Matrix48::Zero();
  for (int i = 0; i < 4; ++i) h(i, i) = 1.0;
  return h;
}

Matrix4 measurement_noise(double height, const KalmanConfig& cfg) {
  const double sp = cfg.std_weight_position * height;
  Vector4 std;
  std << sp, sp, 1e-1, sp;
  return std.array().square().matrix().asDiagonal();
}

double noise_scale(double score, const KalmanConfig& cfg) {
  return std::max(1.0 - std::clamp(score, 0.0, 1.0), cfg.min_noise_scale);
}

}  // namespace

Vector4 to_measurement(const Rect& r) {
  Vector4 z;
  z << r.x + 0.5 * r.w, r.y + 0.5 * r.h, r.w / r.h, r.h;
  return z;
}

Rect to_rect(const Vector8& m) {
  const double h = m(3);
  const double w = m(2) * h;
  return {m(0) - 0.5 * w, m(1) - 0.5 * h, w, h};
}

MotionState initiate(const Rect& r, const KalmanConfig& cfg) {
  MotionState s;
  s.mean.head<4>() = to_measurement(r);
  s.mean.tail<4>().setZero();
  const double p = cfg.std_weight_position * r.h;
  const double v = cfg.std_weight_velocity * r.h;
  Vector8 std;
  std << 2 * p, 2 * p, 1e-2, 2 * p, 10 * v, 10 * v, 1e-5, 10 * v;
  s.covariance = std.array().square().matrix().asDiagonal();
  s.hits = 1;
  return s;
}

MotionState predict(const MotionState& s, const KalmanConfig& cfg) {
  static const Matrix8 f = transition();
  const double h = s.mean(3);
  const double p = cfg.std_weight_position * h;
  const double v = cfg.std_weight_velocity * h;
  Vector8 std;
  std << p, p, 1e-2, p, v, v, 1e-5, v;
  const Matrix8 q = std.array().square().matrix().asDiagonal();

  MotionState out = s;
  out.mean = f * s.mean;
  out.covariance = f * s.covariance * f.transpose() + q;
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose()).eval();
  out.age = s.age + 1;
  return out;
}

Gaussian kalman_correct(const Gaussian& prior, const Eigen::MatrixXd& obs,
                        const Eigen::MatrixXd& noise, const Eigen::VectorXd& z) {
  const Eigen::MatrixXd s = obs * prior.covariance * obs.transpose() + noise;
  const Eigen::LLT<Eigen::MatrixXd> llt(s);
  if (llt.info() != Eigen::Success) throw std::runtime_error("innovation covariance is singular");
  // K = P H^T S^-1
  const Eigen::MatrixXd gain = llt.solve(obs * prior.covariance).transpose();
  Gaussian post;
  post.mean = prior.mean + gain * (z - obs * prior.mean);
  const Eigen::MatrixXd ikh =
      Eigen::MatrixXd::Identity(prior.mean.size(), prior.mean.size()) - gain * obs;
  // Joseph form keeps the posterior symmetric positive semi-definite under rounding.
  post.covariance = ikh * prior.covariance * ikh.transpose() + gain * noise * gain.transpose();
  post.covariance = 0.5 * (post.covariance + post.covariance.transpose()).eval();
  return post;
}

MotionState update(const MotionState& s, const DetBox& z, const KalmanConfig& cfg) {
  if (!z.rect.valid() || !std::isfinite(z.score))
    throw UsageError("non-finite or degenerate measurement");
  static const Eigen::MatrixXd h = observation();
  const Matrix4 r = noise_scale(z.score, cfg) * measurement_noise(s.mean(3), cfg);
  const Gaussian post = kalman_correct({s.mean, s.covariance}, h, r, to_measurement(z.rect));
  MotionState out = s;
  out.mean = post.mean;
  out.covariance = post.covariance;
  out.age = 0;
  out.hits = s.hits + 1;
  return out;
}

double squared_mahalanobis(const Eigen::VectorXd& innovation, const Eigen::MatrixXd& covariance) {
  const Eigen::LLT<Eigen::MatrixXd> llt(covariance);
  if (llt.info() != Eigen::Success) throw std::runtime_error("innovation covariance is singular");
  const Eigen::VectorXd y = llt.matrixL().solve(innovation);
  return y.squaredNorm();
}

Eigen::MatrixXd smooth_covariance(const Eigen::MatrixXd& s, double smoothing) {
  Eigen::MatrixXd out = s;
  out.diagonal() *= (1.0 + smoothing);
  return out;
}

double mahalanobis(const MotionState& s, const DetBox& z, const KalmanConfig& cfg) {
  static const Matrix48 h = observation();
  const Matrix4 r = noise_scale(z.score, cfg) * measurement_noise(s.mean(3), cfg);
  const Matrix4 cov = h * s.covariance * h.transpose() + r;
  const Vector4 innovation = to_measurement(z.rect) - h * s.mean;
  return squared_mahalanobis(innovation, smooth_covariance(cov, cfg.smoothing));
}

bool gate(const MotionState& s, const DetBox& z, double threshold, const KalmanConfig& cfg) {
  return mahalanobis(s, z, cfg) <= threshold;
}

}  // namespace mcmt::motion
