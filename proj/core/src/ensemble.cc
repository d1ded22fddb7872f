#include <algorithm>
#include <cmath>
#include <numeric>

#include "epf/error.h"
#include "epf/parallel.h"
#include "epf/random.h"
#include "epf/regressors.h"

namespace epf {

namespace {

void CheckTrainingSet(const Matrix& x, const Vector& y) {
  if (x.rows() != y.size()) {
    throw Error(ErrorCode::kLengthMismatch, "X and y row counts differ");
  }
  if (x.rows() == 0) {
    throw Error(ErrorCode::kEmptyTrainingSet, "no training rows");
  }
  if (x.cols() == 0) {
    throw Error(ErrorCode::kEmptyTrainingSet, "no feature columns");
  }
}

std::size_t CeilCount(double ratio, std::size_t n) {
  const auto k = static_cast<std::size_t>(std::ceil(ratio * static_cast<double>(n) - 1e-9));
  return std::clamp<std::size_t>(k, 1, n);
}

std::span<const double> AsSpan(const Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

void AddTreePredictions(const Tree& tree, const Matrix& x, double scale,
                        Vector& f) {
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    f(i) += scale * tree.Predict(x.row(i).data());
  }
}

}  // namespace

FittedModel FitTree(const Matrix& x, const Vector& y, const TreeParams& params) {
  RegressorSpec spec{params};
  spec.Validate();
  CheckTrainingSet(x, y);
  const SortedColumns sorted(x);
  TreeBuildOptions options;
  options.criterion = SplitCriterion::kSse;
  options.max_depth = params.max_depth;
  options.min_samples_leaf = params.min_samples_leaf;
  Tree tree = BuildTree(x, sorted, AsSpan(y), {}, {}, options, nullptr);
  return FittedModel(spec, TreeState{std::move(tree)}, DefaultFeatureNames(x.cols()));
}

FittedModel FitForest(const Matrix& x, const Vector& y,
                      const ForestParams& params, std::uint64_t seed) {
  RegressorSpec spec{params, seed};
  spec.Validate();
  CheckTrainingSet(x, y);
  const SortedColumns sorted(x);
  const auto n = static_cast<std::size_t>(x.rows());
  const auto d = static_cast<std::size_t>(x.cols());
  const std::size_t per_split = CeilCount(params.feature_ratio, d);

  std::vector<Tree> trees(static_cast<std::size_t>(params.n_trees));
  ParallelFor(trees.size(), [&](std::size_t t) {
    Rng rng(MixSeed(seed, t));
    std::vector<std::uint32_t> counts;
    if (params.bootstrap) {
      counts.assign(n, 0);
      for (std::size_t draw = 0; draw < n; ++draw) ++counts[rng.Below(n)];
    }
    std::vector<std::size_t> allowed;
    TreeBuildOptions options;
    options.criterion = SplitCriterion::kSse;
    options.max_depth = params.max_depth;
    options.min_samples_leaf = params.min_samples_leaf;
    if (params.sampling == FeatureSampling::kPerTree) {
      allowed = rng.SampleWithoutReplacement(d, per_split);
    } else {
      options.features_per_split = per_split;
    }
    trees[t] = BuildTree(x, sorted, AsSpan(y), counts, allowed, options, &rng);
  });
  return FittedModel(spec, ForestState{std::move(trees)}, DefaultFeatureNames(x.cols()));
}

FittedModel FitGradBoost(const Matrix& x, const Vector& y,
                         const GradBoostParams& params) {
  RegressorSpec spec{params};
  spec.Validate();
  CheckTrainingSet(x, y);
  const SortedColumns sorted(x);

  BoostState state;
  state.base = y.mean();
  state.learning_rate = params.learning_rate;
  Vector f = Vector::Constant(y.size(), state.base);
  Vector residual(y.size());
  TreeBuildOptions options;
  options.criterion = SplitCriterion::kSse;
  options.max_depth = params.max_depth;
  options.min_samples_leaf = params.min_samples_leaf;
  for (int m = 0; m < params.n_stages; ++m) {
    residual = y - f;
    Tree tree = BuildTree(x, sorted, AsSpan(residual), {}, {}, options, nullptr);
    AddTreePredictions(tree, x, params.learning_rate, f);
    state.trees.push_back(std::move(tree));
  }
  return FittedModel(spec, std::move(state), DefaultFeatureNames(x.cols()));
}

FittedModel FitXgbLike(const Matrix& x, const Vector& y,
                       const XgbParams& params, std::uint64_t seed) {
  RegressorSpec spec{params, seed};
  spec.Validate();
  CheckTrainingSet(x, y);
  const SortedColumns sorted(x);
  const auto n = static_cast<std::size_t>(x.rows());
  const auto d = static_cast<std::size_t>(x.cols());
  const std::size_t rows_per_stage = CeilCount(params.subsample, n);
  const std::size_t cols_per_stage = CeilCount(params.colsample, d);

  BoostState state;
  state.base = y.mean();
  state.learning_rate = params.learning_rate;
  Vector f = Vector::Constant(y.size(), state.base);
  Vector residual(y.size());
  TreeBuildOptions options;
  options.criterion = SplitCriterion::kRegularizedGain;
  options.max_depth = params.max_depth;
  options.lambda = params.lambda;
  // Unit hessians: the child weight bound is a sample count.
  options.min_samples_leaf =
      std::max(1, static_cast<int>(std::ceil(params.min_child_weight - 1e-12)));

  Rng rng(seed);
  std::vector<std::uint32_t> counts;
  std::vector<std::size_t> allowed;
  for (int m = 0; m < params.n_stages; ++m) {
    counts.clear();
    if (rows_per_stage < n) {
      counts.assign(n, 0);
      for (std::size_t r : rng.SampleWithoutReplacement(n, rows_per_stage)) counts[r] = 1;
    }
    allowed.clear();
    if (cols_per_stage < d) allowed = rng.SampleWithoutReplacement(d, cols_per_stage);

    residual = y - f;
    Tree tree = BuildTree(x, sorted, AsSpan(residual), counts, allowed, options, nullptr);
    AddTreePredictions(tree, x, params.learning_rate, f);
    state.trees.push_back(std::move(tree));
  }
  return FittedModel(spec, std::move(state), DefaultFeatureNames(x.cols()));
}

}  // namespace epf
