#include "epf/regressors.h"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "epf/error.h"
#include "epf/parallel.h"
#include "internal.h"

namespace epf {

namespace {

constexpr std::array<std::string_view, 8> kKindNames = {
    "Linear", "Ridge", "DecisionTree", "KNN",
    "RandomForest", "GradBoost", "SVR", "XGBoostLike"};
constexpr std::array<std::string_view, 8> kDisplayNames = {
    "Linear", "Ridge", "Decision Tree", "KNN",
    "Random Forest", "GradBoost", "SVR", "XGBoost"};

std::string Fold(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == ' ' || c == '_' || c == '-') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

[[noreturn]] void Bad(std::string_view field, std::string_view rule) {
  throw Error(ErrorCode::kNonPositiveHyperparam,
              std::string(field) + " must be " + std::string(rule));
}

// Overloaded-lambda helper for std::visit.
template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

std::vector<std::string> DefaultFeatureNames(Eigen::Index d) {
  std::vector<std::string> names(static_cast<std::size_t>(std::max<Eigen::Index>(d, 0)));
  for (std::size_t j = 0; j < names.size(); ++j) names[j] = "x" + std::to_string(j);
  return names;
}

std::string_view ModelKindName(ModelKind kind) {
  return kKindNames.at(static_cast<std::size_t>(kind));
}

std::string_view ModelDisplayName(ModelKind kind) {
  return kDisplayNames.at(static_cast<std::size_t>(kind));
}

std::optional<ModelKind> ParseModelKind(std::string_view text) {
  const std::string folded = Fold(text);
  for (ModelKind kind : kAllModelKinds) {
    if (folded == Fold(ModelKindName(kind)) || folded == Fold(ModelDisplayName(kind))) {
      return kind;
    }
  }
  if (folded == "xgb") return ModelKind::kXgbLike;
  if (folded == "tree") return ModelKind::kDecisionTree;
  if (folded == "forest" || folded == "rf") return ModelKind::kRandomForest;
  return std::nullopt;
}

RegressorSpec RegressorSpec::Default(ModelKind kind, std::uint64_t seed) {
  RegressorSpec spec;
  spec.seed = seed;
  switch (kind) {
    case ModelKind::kLinear: spec.params = LinearParams{}; break;
    case ModelKind::kRidge: spec.params = RidgeParams{}; break;
    case ModelKind::kDecisionTree: spec.params = TreeParams{}; break;
    case ModelKind::kKnn: spec.params = KnnParams{}; break;
    case ModelKind::kRandomForest: spec.params = ForestParams{}; break;
    case ModelKind::kGradBoost: spec.params = GradBoostParams{}; break;
    case ModelKind::kSvr: spec.params = SvrParams{}; break;
    case ModelKind::kXgbLike: spec.params = XgbParams{}; break;
  }
  return spec;
}

void RegressorSpec::Validate() const {
  auto rate = [](std::string_view field, double v) {
    if (!(v > 0.0 && v <= 1.0)) Bad(field, "in (0, 1]");
  };
  std::visit(
      Overloaded{
          [](const LinearParams&) {},
          [](const RidgeParams& p) {
            if (!(p.alpha >= 0.0) || !std::isfinite(p.alpha)) Bad("alpha", ">= 0");
          },
          [](const TreeParams& p) {
            if (p.max_depth < 1) Bad("max_depth", ">= 1");
            if (p.min_samples_leaf < 1) Bad("min_samples_leaf", ">= 1");
          },
          [](const KnnParams& p) {
            if (p.k < 1) Bad("k", ">= 1");
          },
          [&](const ForestParams& p) {
            if (p.n_trees < 1) Bad("n_trees", ">= 1");
            rate("feature_ratio", p.feature_ratio);
            if (p.max_depth < 0) Bad("max_depth", ">= 0 (0 = unlimited)");
            if (p.min_samples_leaf < 1) Bad("min_samples_leaf", ">= 1");
          },
          [](const GradBoostParams& p) {
            if (p.n_stages < 1) Bad("n_stages", ">= 1");
            if (!(p.learning_rate >= 0.0) || !std::isfinite(p.learning_rate))
              Bad("learning_rate", ">= 0");
            if (p.max_depth < 1) Bad("max_depth", ">= 1");
            if (p.min_samples_leaf < 1) Bad("min_samples_leaf", ">= 1");
          },
          [](const SvrParams& p) {
            if (!(p.c > 0.0)) Bad("C", "> 0");
            if (!(p.gamma > 0.0)) Bad("gamma", "> 0");
            if (!(p.epsilon >= 0.0)) Bad("epsilon", ">= 0");
            if (!(p.tol > 0.0)) Bad("tol", "> 0");
            if (p.max_iterations < 1) Bad("max_iterations", ">= 1");
            if (!(p.cache_mb > 0.0)) Bad("cache_mb", "> 0");
          },
          [&](const XgbParams& p) {
            if (p.n_stages < 1) Bad("n_stages", ">= 1");
            rate("learning_rate", p.learning_rate);
            rate("subsample", p.subsample);
            rate("colsample", p.colsample);
            if (p.max_depth < 1) Bad("max_depth", ">= 1");
            if (!(p.lambda >= 0.0)) Bad("lambda", ">= 0");
            if (!(p.min_child_weight >= 0.0)) Bad("min_child_weight", ">= 0");
          },
      },
      params);
}

FittedModel::FittedModel(RegressorSpec spec, ModelState state,
                         std::vector<std::string> feature_names)
    : spec_(std::move(spec)), state_(std::move(state)), names_(std::move(feature_names)) {}

Vector FittedModel::Predict(const Matrix& x) const {
  if (static_cast<std::size_t>(x.cols()) != feature_count()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "model expects " + std::to_string(feature_count()) +
                    " features, got " + std::to_string(x.cols()));
  }
  const auto n = static_cast<std::size_t>(x.rows());
  Vector out(x.rows());
  std::visit(
      Overloaded{
          [&](const LinearState& s) {
            if (n > 0) out = (x * s.coefficients).array() + s.intercept;
          },
          [&](const TreeState& s) {
            for (Eigen::Index i = 0; i < x.rows(); ++i) out(i) = s.tree.Predict(x.row(i).data());
          },
          [&](const KnnState& s) {
            const auto& params = std::get<KnnParams>(spec_.params);
            ParallelFor(n, [&](std::size_t i) {
              const auto r = static_cast<Eigen::Index>(i);
              out(r) = KnnPredictOne(s, params, x.row(r).data());
            });
          },
          [&](const ForestState& s) {
            ParallelFor(n, [&](std::size_t i) {
              const auto r = static_cast<Eigen::Index>(i);
              double sum = 0.0;
              for (const Tree& t : s.trees) sum += t.Predict(x.row(r).data());
              out(r) = sum / static_cast<double>(s.trees.size());
            });
          },
          [&](const BoostState& s) { out = PredictStages(x, s.trees.size()); },
          [&](const SvrState& s) {
            const double gamma = std::get<SvrParams>(spec_.params).gamma;
            ParallelFor(n, [&](std::size_t i) {
              const auto r = static_cast<Eigen::Index>(i);
              out(r) = SvrPredictOne(s, gamma, x.row(r).data());
            });
          },
      },
      state_);
  return out;
}

Vector FittedModel::PredictStages(const Matrix& x, std::size_t stages) const {
  const auto* boost = std::get_if<BoostState>(&state_);
  if (boost == nullptr) {
    throw Error(ErrorCode::kInvalidArgument,
                "staged prediction requires a boosted model");
  }
  if (static_cast<std::size_t>(x.cols()) != feature_count()) {
    throw Error(ErrorCode::kDimensionMismatch, "feature count mismatch");
  }
  stages = std::min(stages, boost->trees.size());
  Vector out = Vector::Constant(x.rows(), boost->base);
  // Accumulate stage by stage, exactly as during training.
  for (std::size_t m = 0; m < stages; ++m) {
    const Tree& tree = boost->trees[m];
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      out(i) += boost->learning_rate * tree.Predict(x.row(i).data());
    }
  }
  return out;
}

FittedModel Fit(const RegressorSpec& spec, const Matrix& x, const Vector& y,
                std::vector<std::string> feature_names) {
  spec.Validate();
  if (feature_names.empty()) feature_names = DefaultFeatureNames(x.cols());
  if (feature_names.size() != static_cast<std::size_t>(x.cols())) {
    throw Error(ErrorCode::kDimensionMismatch, "one feature name per column required");
  }
  FittedModel fitted = std::visit(
      Overloaded{
          [&](const LinearParams&) { return FitLinear(x, y); },
          [&](const RidgeParams& p) { return FitRidge(x, y, p.alpha); },
          [&](const TreeParams& p) { return FitTree(x, y, p); },
          [&](const KnnParams& p) { return FitKnn(x, y, p); },
          [&](const ForestParams& p) { return FitForest(x, y, p, spec.seed); },
          [&](const GradBoostParams& p) { return FitGradBoost(x, y, p); },
          [&](const SvrParams& p) { return FitSvr(x, y, p, spec.seed); },
          [&](const XgbParams& p) { return FitXgbLike(x, y, p, spec.seed); },
      },
      spec.params);
  return FittedModel(spec, fitted.state(), std::move(feature_names));
}

}  // namespace epf
