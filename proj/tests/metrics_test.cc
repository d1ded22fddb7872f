#include <gtest/gtest.h>

#include <cmath>

#include "epf/error.h"
#include "epf/metrics.h"
#include "support/fixtures.h"

namespace epf {
namespace {

Vector V(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

ErrorCode CodeOf(const Vector& y, const Vector& yhat) {
  try {
    ComputeMetrics(y, yhat);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE();
  return ErrorCode::kIo;
}

TEST(Metrics, ThreePointExample) {
  const MetricsReport m = ComputeMetrics(V({1, 2, 3}), V({1, 2, 4}));
  EXPECT_NEAR(m.mae, 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(m.mse, 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(m.rmse, std::sqrt(1.0 / 3.0), 1e-12);
  EXPECT_NEAR(m.rmse, 0.57735, 1e-5);
  EXPECT_NEAR(m.r2, 0.5, 1e-12);
  EXPECT_NEAR(m.mape, 1.0 / 9.0, 1e-12);
  EXPECT_NEAR(m.evs, 2.0 / 3.0, 1e-12);
  EXPECT_EQ(m.n, 3u);
}

TEST(Metrics, PerfectPrediction) {
  const Vector y = V({3, -1, 4, 1, 5});
  const MetricsReport m = ComputeMetrics(y, y);
  EXPECT_EQ(m.mae, 0.0);
  EXPECT_EQ(m.mse, 0.0);
  EXPECT_EQ(m.rmse, 0.0);
  EXPECT_EQ(m.r2, 1.0);
  EXPECT_EQ(m.mape, 0.0);
  EXPECT_EQ(m.evs, 1.0);
}

TEST(Metrics, ConstantMeanPredictor) {
  const Vector y = V({1, 2, 3, 6});
  const MetricsReport m = ComputeMetrics(y, Vector::Constant(4, y.mean()));
  EXPECT_NEAR(m.r2, 0.0, 1e-12);
  EXPECT_NEAR(m.evs, 0.0, 1e-12);
}

TEST(Metrics, ShiftedPredictorSeparatesR2FromEvs) {
  const Vector y = V({1, 2, 3, 6});
  const MetricsReport m = ComputeMetrics(y, y.array() + 2.0);
  EXPECT_NEAR(m.evs, 1.0, 1e-12);
  // 1 - 4 / var(y) with population variance 3.5
  EXPECT_NEAR(m.r2, 1.0 - 4.0 / 3.5, 1e-12);
}

TEST(Metrics, Invariants) {
  const Vector y = testing::Noise(200, 5.0, 1).array() + 50.0;
  const Vector yhat = y + testing::Noise(200, 2.0, 2);
  const MetricsReport m = ComputeMetrics(y, yhat);
  EXPECT_NEAR(m.rmse * m.rmse, m.mse, 1e-10);
  EXPECT_LE(m.mae, m.rmse);
  EXPECT_LE(m.r2, m.evs + 1e-12);
  EXPECT_GT(m.mape, 0.0);
  const MetricsReport swapped = ComputeMetrics(yhat, y);
  EXPECT_DOUBLE_EQ(swapped.mae, m.mae);
  EXPECT_DOUBLE_EQ(swapped.mse, m.mse);
}

TEST(Metrics, MapeSkipsZeroTargets) {
  const MetricsReport m = ComputeMetrics(V({0, 2, 4}), V({1, 3, 4}));
  EXPECT_EQ(m.mape_excluded, 1u);
  EXPECT_NEAR(m.mape, 0.25, 1e-15);
  EXPECT_TRUE(std::isnan(ComputeMetrics(V({0, 1e-10}), V({1, 2})).mape));
}

TEST(Metrics, Errors) {
  EXPECT_EQ(CodeOf(V({1, 2}), V({1})), ErrorCode::kLengthMismatch);
  EXPECT_EQ(CodeOf(V({2, 2, 2}), V({1, 2, 3})), ErrorCode::kDegenerateTarget);
  EXPECT_EQ(CodeOf(V({1}), V({1})), ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf(V({1, NAN}), V({1, 2})), ErrorCode::kInvalidArgument);
}

TEST(Metrics, Formatting) {
  EXPECT_EQ(MetricsCsvHeader(), "MAE,MSE,RMSE,R2,MAPE,EVS");
  const std::string json = MetricsToJson(ComputeMetrics(V({1, 2, 3}), V({1, 2, 4})));
  EXPECT_LT(json.find("\"MAE\""), json.find("\"EVS\""));
}

}  // namespace
}  // namespace epf
