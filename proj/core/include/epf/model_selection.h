#ifndef EPF_MODEL_SELECTION_H_
#define EPF_MODEL_SELECTION_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "epf/data_pipeline.h"
#include "epf/metrics.h"
#include "epf/regressors.h"

namespace epf {

enum class FoldMode { kContiguous, kSeededRandom };

std::string_view FoldModeName(FoldMode mode);
std::optional<FoldMode> ParseFoldMode(std::string_view text);

struct FoldPlan {
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<std::size_t> assignment;  // fold index per row
  FoldMode mode = FoldMode::kContiguous;

  // Ascending row indices.
  std::vector<std::size_t> ValidationRows(std::size_t fold) const;
  std::vector<std::size_t> TrainingRows(std::size_t fold) const;
  std::vector<std::size_t> FoldSizes() const;
};

// k blocks whose sizes differ by at most one; the earliest folds take the
// remainder. kSeededRandom shuffles row order before slicing. Throws
// kKOutOfRange unless 2 <= k <= n.
FoldPlan MakeFolds(std::size_t n, std::size_t k,
                   FoldMode mode = FoldMode::kContiguous,
                   std::uint64_t seed = 42);

// Called once per fold before fitting, with the rows used for fitting and
// for scoring.
using FoldObserver = std::function<void(
    std::size_t fold, const std::vector<std::size_t>& train_rows,
    const std::vector<std::size_t>& validation_rows)>;

// One report per fold, in fold order. The matrix is used as is (no per-fold
// re-standardization). Errors are rethrown prefixed with "fold <i>".
std::vector<MetricsReport> CrossValidate(const RegressorSpec& spec,
                                         const FeatureMatrix& matrix,
                                         const FoldPlan& plan,
                                         const FoldObserver& observer = {});

struct GridCandidate {
  Hyperparams params;
  std::vector<MetricsReport> folds;
  double mean_rmse = 0.0;
};

struct GridResult {
  ModelKind kind = ModelKind::kLinear;
  std::size_t k = 0;
  FoldMode mode = FoldMode::kContiguous;
  std::vector<GridCandidate> candidates;
  std::size_t best = 0;  // lowest mean RMSE, earliest on ties

  const GridCandidate& winner() const { return candidates.at(best); }
};

// Every record must belong to `kind` (kInvalidArgument) and be valid
// (kNonPositiveHyperparam). Throws kEmptyGrid for an empty grid. Candidates
// and folds run in parallel; the result does not depend on the thread count.
GridResult GridSearch(ModelKind kind, const std::vector<Hyperparams>& grid,
                      const FeatureMatrix& matrix, const FoldPlan& plan,
                      std::uint64_t seed = 42);

// Shipped search grids. Ridge alpha {0.01, 0.1, 1, 10}, KNN k
// {3, 5, 7, 11, 15}, tree depth {4, 6, 8, 12}; the ensembles and SVR use
// small cartesian grids around their defaults.
std::vector<Hyperparams> DefaultGrid(ModelKind kind);

// Header "candidate,params,fold,MAE,MSE,RMSE,R2,MAPE,EVS"; one row per
// candidate and fold.
std::string GridResultToCsv(const GridResult& result);

// JSON summary: kind, folds, mode, winner index, winner params and each
// candidate's mean RMSE.
std::string GridSummaryToJson(const GridResult& result);

}  // namespace epf

#endif  // EPF_MODEL_SELECTION_H_
