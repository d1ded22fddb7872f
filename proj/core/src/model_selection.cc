#include "epf/model_selection.h"

#include <algorithm>
#include <exception>
#include <numeric>

#include "epf/csv.h"
#include "epf/error.h"
#include "epf/model_io.h"
#include "epf/parallel.h"
#include "epf/random.h"
#include "json.hpp"

namespace epf {

std::string_view FoldModeName(FoldMode mode) {
  return mode == FoldMode::kContiguous ? "contiguous" : "random";
}

std::optional<FoldMode> ParseFoldMode(std::string_view text) {
  if (text == "contiguous" || text == "chronological") return FoldMode::kContiguous;
  if (text == "random" || text == "seeded_random") return FoldMode::kSeededRandom;
  return std::nullopt;
}

std::vector<std::size_t> FoldPlan::ValidationRows(std::size_t fold) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] == fold) rows.push_back(i);
  }
  return rows;
}

std::vector<std::size_t> FoldPlan::TrainingRows(std::size_t fold) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] != fold) rows.push_back(i);
  }
  return rows;
}

std::vector<std::size_t> FoldPlan::FoldSizes() const {
  std::vector<std::size_t> sizes(k, 0);
  for (std::size_t f : assignment) ++sizes.at(f);
  return sizes;
}

FoldPlan MakeFolds(std::size_t n, std::size_t k, FoldMode mode,
                   std::uint64_t seed) {
  if (k < 2 || k > n) {
    throw Error(ErrorCode::kKOutOfRange,
                "fold count " + std::to_string(k) + " outside [2, " +
                    std::to_string(n) + "]");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  if (mode == FoldMode::kSeededRandom) {
    Rng rng(seed);
    rng.Shuffle(order);
  }
  FoldPlan plan;
  plan.n = n;
  plan.k = k;
  plan.mode = mode;
  plan.assignment.assign(n, 0);
  const std::size_t base = n / k;
  const std::size_t extra = n % k;
  std::size_t pos = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t size = base + (f < extra ? 1 : 0);
    for (std::size_t i = 0; i < size; ++i) plan.assignment[order[pos++]] = f;
  }
  return plan;
}

namespace {

MetricsReport RunFold(const RegressorSpec& spec, const FeatureMatrix& matrix,
                      const FoldPlan& plan, std::size_t fold,
                      const FoldObserver& observer) {
  const auto train_rows = plan.TrainingRows(fold);
  const auto valid_rows = plan.ValidationRows(fold);
  if (observer) observer(fold, train_rows, valid_rows);
  try {
    const FittedModel model =
        Fit(spec, TakeRows(matrix.x, train_rows), TakeRows(matrix.y, train_rows),
            matrix.feature_names);
    const Vector pred = model.Predict(TakeRows(matrix.x, valid_rows));
    return ComputeMetrics(TakeRows(matrix.y, valid_rows), pred);
  } catch (const Error& e) {
    throw e.WithContext("fold " + std::to_string(fold));
  }
}

void CheckPlan(const FeatureMatrix& matrix, const FoldPlan& plan) {
  if (plan.n != matrix.rows() || plan.assignment.size() != plan.n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "fold plan covers " + std::to_string(plan.n) + " rows, matrix has " +
                    std::to_string(matrix.rows()));
  }
}

double MeanRmse(const std::vector<MetricsReport>& folds) {
  double sum = 0.0;
  for (const auto& m : folds) sum += m.rmse;
  return sum / static_cast<double>(folds.size());
}

}  // namespace

std::vector<MetricsReport> CrossValidate(const RegressorSpec& spec,
                                         const FeatureMatrix& matrix,
                                         const FoldPlan& plan,
                                         const FoldObserver& observer) {
  CheckPlan(matrix, plan);
  std::vector<MetricsReport> reports;
  reports.reserve(plan.k);
  for (std::size_t f = 0; f < plan.k; ++f) {
    reports.push_back(RunFold(spec, matrix, plan, f, observer));
  }
  return reports;
}

GridResult GridSearch(ModelKind kind, const std::vector<Hyperparams>& grid,
                      const FeatureMatrix& matrix, const FoldPlan& plan,
                      std::uint64_t seed) {
  if (grid.empty()) throw Error(ErrorCode::kEmptyGrid, "grid has no candidates");
  CheckPlan(matrix, plan);
  std::vector<RegressorSpec> specs;
  for (std::size_t c = 0; c < grid.size(); ++c) {
    RegressorSpec spec{grid[c], seed};
    if (spec.kind() != kind) {
      throw Error(ErrorCode::kInvalidArgument,
                  "grid entry " + std::to_string(c) + " is not a " +
                      std::string(ModelKindName(kind)) + " record");
    }
    spec.Validate();
    specs.push_back(std::move(spec));
  }

  const std::size_t jobs = grid.size() * plan.k;
  std::vector<MetricsReport> reports(jobs);
  std::vector<std::exception_ptr> errors(jobs);
  ParallelFor(jobs, [&](std::size_t job) {
    const std::size_t c = job / plan.k;
    const std::size_t f = job % plan.k;
    try {
      reports[job] = RunFold(specs[c], matrix, plan, f, {});
    } catch (const Error& e) {
      errors[job] = std::make_exception_ptr(
          e.WithContext("candidate " + std::to_string(c)));
    } catch (...) {
      errors[job] = std::current_exception();
    }
  });
  // Report the first failing job in (candidate, fold) order.
  for (const auto& error : errors) {
    if (error) std::rethrow_exception(error);
  }

  GridResult result;
  result.kind = kind;
  result.k = plan.k;
  result.mode = plan.mode;
  for (std::size_t c = 0; c < grid.size(); ++c) {
    GridCandidate cand;
    cand.params = grid[c];
    cand.folds.assign(reports.begin() + static_cast<std::ptrdiff_t>(c * plan.k),
                      reports.begin() + static_cast<std::ptrdiff_t>((c + 1) * plan.k));
    cand.mean_rmse = MeanRmse(cand.folds);
    result.candidates.push_back(std::move(cand));
  }
  for (std::size_t c = 1; c < result.candidates.size(); ++c) {
    if (result.candidates[c].mean_rmse < result.candidates[result.best].mean_rmse) {
      result.best = c;
    }
  }
  return result;
}

std::vector<Hyperparams> DefaultGrid(ModelKind kind) {
  std::vector<Hyperparams> grid;
  switch (kind) {
    case ModelKind::kLinear:
      grid.push_back(LinearParams{});
      break;
    case ModelKind::kRidge:
      for (double alpha : {0.01, 0.1, 1.0, 10.0}) grid.push_back(RidgeParams{alpha});
      break;
    case ModelKind::kDecisionTree:
      for (int depth : {4, 6, 8, 12}) {
        TreeParams p;
        p.max_depth = depth;
        grid.push_back(p);
      }
      break;
    case ModelKind::kKnn:
      for (int k : {3, 5, 7, 11, 15}) {
        KnnParams p;
        p.k = k;
        grid.push_back(p);
      }
      break;
    case ModelKind::kRandomForest:
      for (int trees : {50, 100}) {
        for (double ratio : {0.5, 0.7, 1.0}) {
          ForestParams p;
          p.n_trees = trees;
          p.feature_ratio = ratio;
          grid.push_back(p);
        }
      }
      break;
    case ModelKind::kGradBoost:
      for (double lr : {0.05, 0.1, 0.2}) {
        for (int depth : {3, 4, 6}) {
          GradBoostParams p;
          p.learning_rate = lr;
          p.max_depth = depth;
          grid.push_back(p);
        }
      }
      break;
    case ModelKind::kSvr:
      for (double c : {0.1, 1.0, 10.0}) {
        for (double gamma : {0.01, 0.1, 1.0}) {
          SvrParams p;
          p.c = c;
          p.gamma = gamma;
          grid.push_back(p);
        }
      }
      break;
    case ModelKind::kXgbLike:
      for (int stages : {100, 200}) {
        for (double lr : {0.05, 0.1}) {
          for (int depth : {4, 6}) {
            XgbParams p;
            p.n_stages = stages;
            p.learning_rate = lr;
            p.max_depth = depth;
            grid.push_back(p);
          }
        }
      }
      break;
  }
  return grid;
}

std::string GridResultToCsv(const GridResult& result) {
  std::string out = "candidate,params,fold," + MetricsCsvHeader() + "\n";
  for (std::size_t c = 0; c < result.candidates.size(); ++c) {
    const auto& cand = result.candidates[c];
    const std::string params = CsvEscape(DescribeHyperparams(cand.params));
    for (std::size_t f = 0; f < cand.folds.size(); ++f) {
      out += std::to_string(c) + "," + params + "," + std::to_string(f) + "," +
             MetricsCsvFields(cand.folds[f]) + "\n";
    }
  }
  return out;
}

std::string GridSummaryToJson(const GridResult& result) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["schema_id"] = "epf.grid_result/1";
  j["kind"] = ModelKindName(result.kind);
  j["folds"] = result.k;
  j["fold_mode"] = FoldModeName(result.mode);
  j["best"] = result.best;
  j["best_params"] = ordered_json::parse(HyperparamsToJson(result.winner().params));
  j["best_mean_rmse"] = result.winner().mean_rmse;
  ordered_json cands = ordered_json::array();
  for (const auto& cand : result.candidates) {
    cands.push_back({{"params", ordered_json::parse(HyperparamsToJson(cand.params))},
                     {"mean_rmse", cand.mean_rmse}});
  }
  j["candidates"] = std::move(cands);
  return j.dump(1) + "\n";
}

}  // namespace epf
