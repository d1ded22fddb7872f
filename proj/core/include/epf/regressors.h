#ifndef EPF_REGRESSORS_H_
#define EPF_REGRESSORS_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "epf/linalg.h"
#include "epf/tree.h"

namespace epf {

// Declaration order is the order models appear in the benchmark table, and
// matches the alternative order of Hyperparams.
enum class ModelKind {
  kLinear = 0,
  kRidge,
  kDecisionTree,
  kKnn,
  kRandomForest,
  kGradBoost,
  kSvr,
  kXgbLike,
};

inline constexpr std::array<ModelKind, 8> kAllModelKinds = {
    ModelKind::kLinear,       ModelKind::kRidge,     ModelKind::kDecisionTree,
    ModelKind::kKnn,          ModelKind::kRandomForest, ModelKind::kGradBoost,
    ModelKind::kSvr,          ModelKind::kXgbLike};

// Identifier used in files and on the command line, e.g. "RandomForest".
std::string_view ModelKindName(ModelKind kind);
// Row label in the metrics table, e.g. "Random Forest".
std::string_view ModelDisplayName(ModelKind kind);
// Accepts either name form, case-insensitively, plus "xgboost".
std::optional<ModelKind> ParseModelKind(std::string_view text);

struct LinearParams {};

struct RidgeParams {
  double alpha = 0.1;
};

struct TreeParams {
  int max_depth = 8;
  int min_samples_leaf = 5;
};

enum class KnnWeighting { kUniform, kInverseDistance };

struct KnnParams {
  int k = 5;
  KnnWeighting weighting = KnnWeighting::kInverseDistance;
};

struct ForestParams {
  int n_trees = 100;
  double feature_ratio = 0.7;
  int max_depth = 0;  // 0 = unlimited
  int min_samples_leaf = 1;
  bool bootstrap = true;
  FeatureSampling sampling = FeatureSampling::kPerSplit;
};

struct GradBoostParams {
  int n_stages = 100;
  // 0 is accepted and freezes the ensemble at the mean.
  double learning_rate = 0.1;
  int max_depth = 4;
  int min_samples_leaf = 1;
};

struct SvrParams {
  double c = 1.0;
  double gamma = 0.1;
  double epsilon = 0.1;
  double tol = 1e-3;
  std::int64_t max_iterations = 10'000'000;
  // Larger training sets are replaced by a seeded uniform subsample.
  std::size_t max_train = 8000;
  // Kernel row cache budget.
  double cache_mb = 256.0;
};

struct XgbParams {
  int n_stages = 200;
  double learning_rate = 0.05;
  int max_depth = 6;
  double subsample = 0.8;
  double colsample = 0.7;
  double lambda = 1.0;
  double min_child_weight = 1.0;
};

using Hyperparams =
    std::variant<LinearParams, RidgeParams, TreeParams, KnnParams,
                 ForestParams, GradBoostParams, SvrParams, XgbParams>;

struct RegressorSpec {
  Hyperparams params;
  std::uint64_t seed = 42;

  ModelKind kind() const { return static_cast<ModelKind>(params.index()); }

  // Defaults for `kind`.
  static RegressorSpec Default(ModelKind kind, std::uint64_t seed = 42);

  // Throws Error(kNonPositiveHyperparam) naming the offending field.
  void Validate() const;
};

// ---------------------------------------------------------------------------
// Learned state per family
// ---------------------------------------------------------------------------

struct LinearState {
  Vector coefficients;
  double intercept = 0.0;
};

struct TreeState {
  Tree tree;
};

struct KnnState {
  Matrix x;
  Vector y;
};

struct ForestState {
  std::vector<Tree> trees;
};

// Shared by GradBoost and XGBoostLike: F(x) = base + rate * sum_m tree_m(x).
struct BoostState {
  double base = 0.0;
  double learning_rate = 0.0;
  std::vector<Tree> trees;
};

struct SvrState {
  Matrix support;        // support vectors, one per row
  Vector dual_coef;      // alpha_i - alpha_i^*
  double bias = 0.0;
  bool converged = true;
  double final_violation = 0.0;
  std::int64_t iterations = 0;
  std::size_t rows_used = 0;
  std::size_t rows_total = 0;
};

using ModelState = std::variant<LinearState, TreeState, KnnState, ForestState,
                                BoostState, SvrState>;

// A trained regressor. Immutable; Predict is const and safe to call from many
// threads at once.
class FittedModel {
 public:
  FittedModel(RegressorSpec spec, ModelState state,
              std::vector<std::string> feature_names);

  const RegressorSpec& spec() const { return spec_; }
  ModelKind kind() const { return spec_.kind(); }
  const ModelState& state() const { return state_; }
  const std::vector<std::string>& feature_names() const { return names_; }
  std::size_t feature_count() const { return names_.size(); }

  template <typename T>
  const T& state_as() const {
    return std::get<T>(state_);
  }

  // One prediction per row. Throws kDimensionMismatch on a width mismatch.
  Vector Predict(const Matrix& x) const;

  // Boosted kinds only: prediction using the first `stages` trees.
  Vector PredictStages(const Matrix& x, std::size_t stages) const;

 private:
  RegressorSpec spec_;
  ModelState state_;
  std::vector<std::string> names_;
};

// x0, x1, ... for `d` columns.
std::vector<std::string> DefaultFeatureNames(Eigen::Index d);

// Dispatches on spec.kind(). Feature names default to x0, x1, ...
FittedModel Fit(const RegressorSpec& spec, const Matrix& x, const Vector& y,
                std::vector<std::string> feature_names = {});

inline Vector Predict(const FittedModel& model, const Matrix& x) {
  return model.Predict(x);
}

// Ordinary least squares with intercept, solved by column-pivoted QR on
// centered data. Throws kRankDeficient on collinear features or n < d + 1.
FittedModel FitLinear(const Matrix& x, const Vector& y);

// Minimizes ||y - Xw - b||^2 + alpha ||w||^2; the intercept is unpenalized.
FittedModel FitRidge(const Matrix& x, const Vector& y, double alpha);

// CART regression tree grown by sum-of-squares reduction.
FittedModel FitTree(const Matrix& x, const Vector& y, const TreeParams& params);

// Stores the training set. Throws kKExceedsN.
FittedModel FitKnn(const Matrix& x, const Vector& y, const KnnParams& params);

FittedModel FitForest(const Matrix& x, const Vector& y,
                      const ForestParams& params, std::uint64_t seed);

FittedModel FitGradBoost(const Matrix& x, const Vector& y,
                         const GradBoostParams& params);

// Epsilon-SVR with an RBF kernel solved in the dual by SMO. A run that hits
// max_iterations with violation above 10 * tol is returned with
// SvrState::converged == false rather than thrown.
FittedModel FitSvr(const Matrix& x, const Vector& y, const SvrParams& params,
                   std::uint64_t seed);

FittedModel FitXgbLike(const Matrix& x, const Vector& y,
                       const XgbParams& params, std::uint64_t seed);

// KNN prediction for a single query against stored rows; exposed for the
// explainer and benchmarks.
double KnnPredictOne(const KnnState& state, const KnnParams& params,
                     const double* query);

}  // namespace epf

#endif  // EPF_REGRESSORS_H_
