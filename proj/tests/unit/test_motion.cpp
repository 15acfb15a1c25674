#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "mcmt/core/errors.hpp"
#include "mcmt/motion/kalman.hpp"

namespace mcmt::motion {
namespace {

using testing::make_box;

DetBox measurement(const Rect& r, double score) { return make_box(0, r, {1, 0}, score); }

bool positive_definite(const Matrix8& m) {
  if (!m.isApprox(m.transpose(), 1e-9)) return false;
  const Eigen::SelfAdjointEigenSolver<Matrix8> es(m);
  return es.eigenvalues().minCoeff() > 0.0;
}

TEST(Kalman, MeasurementRoundTrip) {
  const Rect r{10, 20, 40, 30};
  const Vector4 z = to_measurement(r);
  EXPECT_DOUBLE_EQ(z(0), 30.0);
  EXPECT_DOUBLE_EQ(z(1), 35.0);
  EXPECT_DOUBLE_EQ(z(2), 40.0 / 30.0);
  EXPECT_DOUBLE_EQ(z(3), 30.0);
  const Rect back = to_rect(initiate(r).mean);
  EXPECT_NEAR(back.x, r.x, 1e-12);
  EXPECT_NEAR(back.y, r.y, 1e-12);
  EXPECT_NEAR(back.w, r.w, 1e-12);
  EXPECT_NEAR(back.h, r.h, 1e-12);
}

TEST(Kalman, ZeroVelocityIsFixedPoint) {
  const MotionState s = initiate({10, 20, 40, 30});
  const MotionState p = predict(s);
  EXPECT_EQ(p.mean.head<4>(), s.mean.head<4>());
  EXPECT_EQ(p.age, 1);
}

TEST(Kalman, LinearTransition) {
  MotionState s = initiate({10, 20, 40, 30});
  s.mean(4) = 2.0;
  s.mean(5) = -1.5;
  const MotionState one = predict(s);
  EXPECT_DOUBLE_EQ(one.mean(0), s.mean(0) + 2.0);
  EXPECT_DOUBLE_EQ(one.mean(1), s.mean(1) - 1.5);
  // F^2 on the mean is a displacement of twice the velocity
  const MotionState two = predict(one);
  EXPECT_DOUBLE_EQ(two.mean(0), s.mean(0) + 4.0);
  EXPECT_DOUBLE_EQ(two.mean(1), s.mean(1) - 3.0);
  EXPECT_EQ(two.mean.tail<4>(), s.mean.tail<4>());
}

TEST(Kalman, NoiselessUpdateReturnsMeasurement) {
  MotionState s = predict(initiate({10, 20, 40, 30}));
  const Rect z{14, 18, 42, 31};
  const MotionState post = update(s, measurement(z, 1.0));
  const Vector4 want = to_measurement(z);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(post.mean(i), want(i), 1e-9);
  EXPECT_EQ(post.age, 0);
  EXPECT_EQ(post.hits, s.hits + 1);
}

TEST(Kalman, HalfConfidenceLandsStrictlyBetween) {
  const MotionState s = predict(initiate({10, 20, 40, 30}));
  const Rect z{30, 40, 40, 30};
  const MotionState post = update(s, measurement(z, 0.5));
  const Vector4 want = to_measurement(z);
  for (int i : {0, 1}) {
    EXPECT_GT(post.mean(i), s.mean(i));
    EXPECT_LT(post.mean(i), want(i));
  }
}

TEST(Kalman, LowerScoreTrustsMeasurementLess) {
  const MotionState s = predict(initiate({10, 20, 40, 30}));
  const Rect z{30, 20, 40, 30};
  double prev = s.mean(0);
  for (double score : {0.1, 0.3, 0.5, 0.7, 0.9, 1.0}) {
    const double x = update(s, measurement(z, score)).mean(0);
    EXPECT_GT(x, prev);
    prev = x;
  }
}

TEST(Kalman, ScalarCorrection) {
  Gaussian prior{Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Constant(1, 1, 4.0)};
  const Eigen::MatrixXd h = Eigen::MatrixXd::Identity(1, 1);
  const Eigen::MatrixXd r = Eigen::MatrixXd::Constant(1, 1, 1.0);
  const Eigen::VectorXd z = Eigen::VectorXd::Constant(1, 10.0);
  const Gaussian post = kalman_correct(prior, h, r, z);
  EXPECT_NEAR(post.mean(0), 8.0, 1e-12);
  // 4 * 1 / (4 + 1)
  EXPECT_NEAR(post.covariance(0, 0), 0.8, 1e-12);
}

TEST(Kalman, ScalarMahalanobisAndGate) {
  const Eigen::VectorXd innov = Eigen::VectorXd::Constant(1, 3.0);
  const Eigen::MatrixXd var = Eigen::MatrixXd::Constant(1, 1, 9.0);
  const double d = squared_mahalanobis(innov, var);
  EXPECT_NEAR(d, 1.0, 1e-12);
  EXPECT_FALSE(d <= 0.99);
}

TEST(Kalman, MahalanobisAtMeanIsZero) {
  const Rect r{10, 20, 40, 30};
  const MotionState s = predict(initiate(r));
  EXPECT_NEAR(mahalanobis(s, measurement(r, 0.9)), 0.0, 1e-18);
  EXPECT_TRUE(gate(s, measurement(r, 0.9), 1e-9));
  EXPECT_FALSE(gate(s, measurement({12, 20, 40, 30}, 0.9), 0.0));
}

TEST(Kalman, MahalanobisMatchesDenseFormula) {
  std::mt19937 rng(4);
  std::normal_distribution<double> off(0.0, 3.0);
  KalmanConfig cfg;
  MotionState s = initiate({100, 50, 40, 30}, cfg);
  for (int i = 0; i < 5; ++i) s = update(predict(s, cfg), measurement({100.0 + 3 * i, 50, 40, 30}, 0.8), cfg);
  s = predict(s, cfg);
  for (int trial = 0; trial < 100; ++trial) {
    const double score = 0.2 + 0.7 * (trial % 10) / 10.0;
    const Rect z{s.mean(0) - 20 + off(rng), s.mean(1) - 15 + off(rng), 40 + off(rng), 30 + off(rng)};
    // reference: S = H P H^T + (1 - score) R, inflated diagonal, explicit inverse
    const double sp = cfg.std_weight_position * s.mean(3);
    Eigen::Vector4d rdiag(sp * sp, sp * sp, 1e-2, sp * sp);
    Eigen::Matrix4d sm = s.covariance.topLeftCorner<4, 4>();
    sm.diagonal() += (1.0 - score) * rdiag;
    sm.diagonal() *= 1.0 + cfg.smoothing;
    const Eigen::Vector4d y = to_measurement(z) - s.mean.head<4>();
    const double want = y.dot(sm.inverse() * y);
    EXPECT_NEAR(mahalanobis(s, measurement(z, score), cfg), want, 1e-9 * std::max(1.0, want));
  }
}

TEST(Kalman, SmoothingNeverIncreasesDistance) {
  const MotionState s = predict(initiate({10, 20, 40, 30}));
  const DetBox z = measurement({15, 24, 41, 29}, 0.7);
  double prev = std::numeric_limits<double>::infinity();
  for (double lambda : {0.0, 0.1, 0.2, 0.5, 1.0, 4.0}) {
    KalmanConfig cfg;
    cfg.smoothing = lambda;
    const double d = mahalanobis(s, z, cfg);
    EXPECT_LE(d, prev);
    prev = d;
  }
}

TEST(Kalman, MahalanobisTranslationInvariant) {
  std::mt19937 rng(12);
  std::uniform_real_distribution<double> shift(-500.0, 500.0);
  const MotionState s = predict(initiate({100, 80, 40, 30}));
  const Rect z{104, 77, 42, 31};
  const double base = mahalanobis(s, measurement(z, 0.8));
  for (int trial = 0; trial < 100; ++trial) {
    const double dx = shift(rng), dy = shift(rng);
    MotionState moved = s;
    moved.mean(0) += dx;
    moved.mean(1) += dy;
    const Rect zm{z.x + dx, z.y + dy, z.w, z.h};
    EXPECT_NEAR(mahalanobis(moved, measurement(zm, 0.8)), base, 1e-8 * std::max(1.0, base));
  }
}

TEST(Kalman, RejectsNonFiniteMeasurement) {
  const MotionState s = initiate({10, 20, 40, 30});
  EXPECT_THROW(update(s, measurement({NAN, 20, 40, 30}, 0.9)), UsageError);
  EXPECT_THROW(update(s, measurement({10, 20, 40, 30}, NAN)), UsageError);
  EXPECT_THROW(update(s, measurement({10, 20, -4, 30}, 0.9)), UsageError);
}

TEST(Kalman, CovarianceStaysPositiveDefinite) {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> score(0.0, 1.0);
  std::normal_distribution<double> jitter(0.0, 4.0);
  std::bernoulli_distribution skip(0.2);
  MotionState s = initiate({200, 200, 60, 40});
  for (int step = 0; step < 10000; ++step) {
    s = predict(s);
    ASSERT_TRUE(positive_definite(s.covariance)) << "after predict " << step;
    if (skip(rng)) continue;
    const double h = std::max(10.0, s.mean(3) + jitter(rng) * 0.1);
    const Rect z{s.mean(0) + jitter(rng) - 30, s.mean(1) + jitter(rng) - h / 2, 60 + jitter(rng) * 0.1, h};
    s = update(s, measurement(z, score(rng)));
    ASSERT_TRUE(positive_definite(s.covariance)) << "after update " << step;
    if (step % 500 == 0) s = initiate({200, 200, 60, 40});
  }
}

TEST(Kalman, PerfectConfidenceTracksEveryMeasurement) {
  std::mt19937 rng(6);
  std::normal_distribution<double> jitter(0.0, 5.0);
  MotionState s = initiate({50, 50, 40, 30});
  for (int step = 0; step < 200; ++step) {
    s = predict(s);
    const Rect z{50 + 2.0 * step + jitter(rng), 50 + jitter(rng), 40, 30};
    s = update(s, measurement(z, 1.0));
    const Vector4 want = to_measurement(z);
    for (int i = 0; i < 4; ++i) ASSERT_NEAR(s.mean(i), want(i), 1e-9);
  }
}

TEST(Kalman, ConvergesOnConstantVelocity) {
  // The default noise model closes the loop with a pole near 0.88, so the lag of a
  // zero-velocity start shrinks geometrically and passes 1e-6 px after roughly 110 updates.
  const double vx = 3.0, vy = -1.0;
  MotionState s = initiate({0, 500, 40, 30});
  Rect truth{0, 500, 40, 30};
  double err_at_50 = 0.0;
  for (int step = 1; step <= 200; ++step) {
    s = predict(s);
    truth = {vx * step, 500 + vy * step, 40, 30};
    s = update(s, measurement(truth, 0.6));
    if (step == 50) err_at_50 = std::abs(to_rect(s.mean).x - truth.x);
  }
  const Rect est = to_rect(s.mean);
  EXPECT_LT(std::abs(est.x - truth.x), 1e-6);
  EXPECT_LT(std::abs(est.y - truth.y), 1e-6);
  EXPECT_NEAR(s.mean(4), vx, 1e-6);
  EXPECT_LT(std::abs(est.x - truth.x), err_at_50 * 1e-3);
  const Rect ahead = to_rect(predict(s).mean);
  EXPECT_LT(std::abs(ahead.x - (truth.x + vx)), 1e-6);
}

TEST(Kalman, SmoothCovarianceInflatesDiagonalOnly) {
  Eigen::MatrixXd s(2, 2);
  s << 4, 1, 1, 9;
  const Eigen::MatrixXd out = smooth_covariance(s, 0.2);
  EXPECT_DOUBLE_EQ(out(0, 0), 4.8);
  EXPECT_DOUBLE_EQ(out(1, 1), 10.8);
  EXPECT_DOUBLE_EQ(out(0, 1), 1.0);
}

}  // namespace
}  // namespace mcmt::motion
