#include <gtest/gtest.h>

#include "epf/error.h"
#include "epf/regressors.h"
#include "epf/tree.h"
#include "support/fixtures.h"

namespace epf {
namespace {

using testing::Mse;
using testing::Noise;
using testing::RandomMatrix;

Vector Quadratic(const Matrix& x) {
  return (x.col(0).array().square() * 3.0 + x.col(1).array() * x.col(2).array()).matrix();
}

TEST(Forest, DegenerateForestIsSingleTree) {
  const Matrix x = RandomMatrix(200, 4, 1);
  const Vector y = Quadratic(x) + Noise(200, 0.2, 2);
  ForestParams fp;
  fp.n_trees = 1;
  fp.feature_ratio = 1.0;
  fp.bootstrap = false;
  fp.max_depth = 8;
  fp.min_samples_leaf = 5;
  const FittedModel forest = FitForest(x, y, fp, 99);
  const FittedModel tree = FitTree(x, y, {8, 5});
  const Matrix q = RandomMatrix(100, 4, 3);
  EXPECT_EQ(forest.Predict(q), tree.Predict(q));
}

TEST(Forest, SameSeedSamePredictions) {
  const Matrix x = RandomMatrix(150, 5, 4);
  const Vector y = Quadratic(x) + Noise(150, 0.2, 5);
  ForestParams fp;
  fp.n_trees = 20;
  const Matrix q = RandomMatrix(50, 5, 6);
  EXPECT_EQ(FitForest(x, y, fp, 7).Predict(q), FitForest(x, y, fp, 7).Predict(q));
  EXPECT_NE(FitForest(x, y, fp, 7).Predict(q), FitForest(x, y, fp, 8).Predict(q));
  fp.sampling = FeatureSampling::kPerTree;
  EXPECT_EQ(FitForest(x, y, fp, 7).Predict(q), FitForest(x, y, fp, 7).Predict(q));
}

TEST(Forest, AveragingReducesVariance) {
  const Matrix x = RandomMatrix(400, 3, 9);
  const Vector y = Quadratic(x) + Noise(400, 0.5, 10);
  const Matrix xt = RandomMatrix(400, 3, 11);
  const Vector yt = Quadratic(xt);
  ForestParams fp;
  fp.n_trees = 50;
  const double forest = Mse(FitForest(x, y, fp, 12).Predict(xt), yt);
  const double tree = Mse(FitTree(x, y, {30, 1}).Predict(xt), yt);
  EXPECT_LE(forest, tree);
}

TEST(GradBoost, SingleFullStageInterpolates) {
  const Matrix x = RandomMatrix(64, 2, 13);
  const Vector y = Noise(64, 1.0, 14);
  const FittedModel m = FitGradBoost(x, y, {1, 1.0, 20, 1});
  EXPECT_LT((m.Predict(x) - y).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(GradBoost, ZeroLearningRateIsMean) {
  const Matrix x = RandomMatrix(50, 3, 15);
  const Vector y = Noise(50, 1.0, 16);
  const Vector p = FitGradBoost(x, y, {10, 0.0, 3, 1}).Predict(RandomMatrix(20, 3, 17));
  for (Eigen::Index i = 0; i < p.size(); ++i) EXPECT_EQ(p(i), y.mean());
}

TEST(GradBoost, TrainingLossNonIncreasing) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Matrix x = RandomMatrix(150, 4, seed);
    const Vector y = Quadratic(x) + Noise(150, 0.3, seed + 50);
    const FittedModel m = FitGradBoost(x, y, {100, 0.1, 3, 1});
    double prev = Mse(Vector::Constant(150, y.mean()), y);
    for (std::size_t s = 1; s <= 100; ++s) {
      const double mse = Mse(m.PredictStages(x, s), y);
      EXPECT_LE(mse, prev + 1e-12) << "seed " << seed << " stage " << s;
      prev = mse;
    }
  }
}

TEST(XgbLike, ReducesToGradBoost) {
  const Matrix x = RandomMatrix(200, 4, 21);
  const Vector y = Quadratic(x) + Noise(200, 0.3, 22);
  XgbParams xp;
  xp.n_stages = 50;
  xp.learning_rate = 0.1;
  xp.max_depth = 4;
  xp.subsample = 1.0;
  xp.colsample = 1.0;
  xp.lambda = 0.0;
  xp.min_child_weight = 1.0;
  const FittedModel xgb = FitXgbLike(x, y, xp, 3);
  const FittedModel gbm = FitGradBoost(x, y, {50, 0.1, 4, 1});
  for (std::size_t s = 1; s <= 50; s += 7) {
    EXPECT_LT((xgb.PredictStages(x, s) - gbm.PredictStages(x, s)).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(XgbLike, HugeLambdaFreezesAtMean) {
  const Matrix x = RandomMatrix(100, 3, 23);
  const Vector y = Noise(100, 2.0, 24).array() + 40.0;
  XgbParams xp;
  xp.lambda = 1e9;
  xp.n_stages = 20;
  const FittedModel m = FitXgbLike(x, y, xp, 5);
  for (const Tree& t : m.state_as<BoostState>().trees) {
    for (const TreeNode& n : t.nodes) EXPECT_LT(std::abs(n.value), 1e-5);
  }
  EXPECT_LT((m.Predict(x).array() - y.mean()).abs().maxCoeff(), 1e-4);
}

TEST(XgbLike, FourPointRootGain) {
  Matrix x(4, 1);
  x << 1, 2, 3, 4;
  Vector y(4);
  y << -1, -1, 1, 1;  // mean 0, gradients g = -(y - 0) = +-1, h = 1
  XgbParams xp;
  xp.n_stages = 1;
  xp.max_depth = 1;
  xp.subsample = 1.0;
  xp.colsample = 1.0;
  xp.lambda = 1.0;
  xp.learning_rate = 1.0;
  const FittedModel t_model = FitXgbLike(x, y, xp, 1);
  const auto& t = t_model.state_as<BoostState>().trees[0];
  // Split at 2.5: 0.5 * (2^2/3 + 2^2/3 - 0^2/5) = 4/3. Split at 1.5 or 3.5: 0.375.
  EXPECT_EQ(t.nodes[0].threshold, 2.5);
  EXPECT_NEAR(t.nodes[0].gain, 4.0 / 3.0, 1e-15);
  EXPECT_NEAR(RegularizedSplitGain(1, 1, -1, 3, 1.0), 0.375, 1e-15);
  // Leaf weights -G / (H + lambda) = +-2/3.
  EXPECT_NEAR(t.nodes[static_cast<std::size_t>(t.nodes[0].left)].value, -2.0 / 3.0, 1e-15);
  EXPECT_NEAR(t.nodes[static_cast<std::size_t>(t.nodes[0].right)].value, 2.0 / 3.0, 1e-15);
}

TEST(XgbLike, SeededSampling) {
  const Matrix x = RandomMatrix(120, 6, 25);
  const Vector y = Quadratic(x) + Noise(120, 0.3, 26);
  XgbParams xp;
  xp.n_stages = 30;
  EXPECT_EQ(FitXgbLike(x, y, xp, 1).Predict(x), FitXgbLike(x, y, xp, 1).Predict(x));
  EXPECT_NE(FitXgbLike(x, y, xp, 1).Predict(x), FitXgbLike(x, y, xp, 2).Predict(x));
}

TEST(Boosting, StagedPredictionRequiresBoostedModel) {
  const FittedModel m = FitTree(RandomMatrix(10, 1, 1), Noise(10, 1, 1), {3, 1});
  try {
    m.PredictStages(RandomMatrix(2, 1, 1), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

}  // namespace
}  // namespace epf
