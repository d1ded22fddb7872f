#include <gtest/gtest.h>

#include <numeric>

#include "epf/error.h"
#include "epf/regressors.h"
#include "epf/tree.h"
#include "support/fixtures.h"

namespace epf {
namespace {

using testing::Noise;
using testing::RandomMatrix;

std::vector<std::size_t> AllRows(Eigen::Index n) {
  std::vector<std::size_t> rows(static_cast<std::size_t>(n));
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return rows;
}

double OraclePredict(const oracle::OracleNode& node, const double* row) {
  if (node.feature < 0) return node.value;
  return row[node.feature] <= node.threshold ? OraclePredict(*node.left, row)
                                             : OraclePredict(*node.right, row);
}

TEST(Tree, SeparableStep) {
  Matrix x(10, 1);
  Vector y(10);
  for (int i = 0; i < 10; ++i) {
    x(i, 0) = -2.25 + 0.5 * i;  // -0.25 and 0.25 straddle zero
    y(i) = x(i, 0) < 0 ? 0.0 : 10.0;
  }
  const FittedModel t_model = FitTree(x, y, {8, 1});
  const auto& t = t_model.state_as<TreeState>().tree;
  EXPECT_EQ(t.Depth(), 1);
  EXPECT_EQ(t.nodes[0].feature, 0);
  EXPECT_GT(t.nodes[0].threshold, -0.25);
  EXPECT_LT(t.nodes[0].threshold, 0.25);
  EXPECT_EQ(t.nodes[static_cast<std::size_t>(t.nodes[0].left)].value, 0.0);
  EXPECT_EQ(t.nodes[static_cast<std::size_t>(t.nodes[0].right)].value, 10.0);
}

TEST(Tree, DepthOneBound) {
  const Matrix x = RandomMatrix(60, 3, 7);
  const Vector y = Noise(60, 1.0, 8);
  const FittedModel t_model = FitTree(x, y, {1, 1});
  const auto& t = t_model.state_as<TreeState>().tree;
  EXPECT_LE(t.Depth(), 1);
  EXPECT_LE(t.nodes.size(), 3u);
}

TEST(Tree, DepthBoundHolds) {
  const Matrix x = RandomMatrix(300, 4, 9);
  const Vector y = Noise(300, 1.0, 10);
  for (int depth : {2, 3, 5}) {
    const FittedModel t_model = FitTree(x, y, {depth, 1});
  const auto& t = t_model.state_as<TreeState>().tree;
    EXPECT_LE(t.Depth(), depth);
    for (const TreeNode& n : t.nodes) {
      if (n.is_leaf()) continue;
      EXPECT_GT(n.left, 0);
      EXPECT_EQ(t.nodes[static_cast<std::size_t>(n.left)].depth, n.depth + 1);
    }
  }
}

TEST(Tree, MinLeafRespected) {
  const Matrix x = RandomMatrix(200, 2, 11);
  const Vector y = Noise(200, 1.0, 12);
  const FittedModel t_model = FitTree(x, y, {20, 7});
  const auto& t = t_model.state_as<TreeState>().tree;
  for (const TreeNode& n : t.nodes) {
    if (n.is_leaf()) EXPECT_GE(n.n_samples, 7.0);
  }
}

TEST(Tree, MatchesBruteForceOracle) {
  int near_ties = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Eigen::Index n = 40;
    const Matrix x = RandomMatrix(n, 3, seed);
    Vector y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      y(i) = (x(i, 0) > 0.2 ? 5.0 : 0.0) + (x(i, 1) > -0.4 ? 2.0 : 0.0);
    }
    y += Noise(n, 0.3, seed + 100);
    for (int min_leaf : {1, 3}) {
      const FittedModel t_model = FitTree(x, y, {6, min_leaf});
  const auto& t = t_model.state_as<TreeState>().tree;
      const auto o = oracle::GrowTree(x, y, AllRows(n), 0, 6, static_cast<std::size_t>(min_leaf));
      EXPECT_EQ(testing::CompareWithOracle(t, 0, *o, near_ties), 0) << "seed " << seed;
      const Matrix q = RandomMatrix(50, 3, seed + 200, -1.2, 1.2);
      for (Eigen::Index i = 0; i < q.rows(); ++i) {
        EXPECT_NEAR(t.Predict(q.row(i).data()), OraclePredict(*o, q.row(i).data()), 1e-12);
      }
      for (Eigen::Index i = 0; i < n; ++i) {
        EXPECT_NEAR(t.Predict(x.row(i).data()), OraclePredict(*o, x.row(i).data()), 1e-12);
      }
    }
  }
  EXPECT_EQ(near_ties, 0);
}

TEST(Tree, DeepTreeMemorizes) {
  const Matrix x = RandomMatrix(100, 2, 13);
  const Vector y = Noise(100, 3.0, 14);
  const FittedModel m = Fit(RegressorSpec{TreeParams{30, 1}}, x, y);
  EXPECT_EQ(m.Predict(x), y);
}

TEST(Tree, ThresholdMidpointNeverReachesUpperValue) {
  EXPECT_EQ(SplitMidpoint(1.0, 3.0), 2.0);
  const double a = 1.0, b = std::nextafter(1.0, 2.0);
  EXPECT_LT(SplitMidpoint(a, b), b);
  EXPECT_GE(SplitMidpoint(a, b), a);
}

TEST(Tree, InvalidHyperparameters) {
  try {
    FitTree(RandomMatrix(5, 1, 1), Noise(5, 1, 2), {0, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonPositiveHyperparam);
  }
}

}  // namespace
}  // namespace epf
