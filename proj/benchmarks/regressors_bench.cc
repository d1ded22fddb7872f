#include <benchmark/benchmark.h>

#include <random>

#include "epf/lime.h"
#include "epf/metrics.h"
#include "epf/model_selection.h"
#include "epf/regressors.h"

namespace {

using namespace epf;

struct Data {
  Matrix x;
  Vector y;
};

Data MakeData(Eigen::Index n, Eigen::Index d, std::uint64_t seed = 1) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  Data data{Matrix(n, d), Vector(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) data.x(i, j) = nd(gen);
    data.y(i) = data.x(i, 0) * data.x(i, 0) + std::sin(data.x(i, 1)) + 0.1 * nd(gen);
  }
  return data;
}

void BM_Fit(benchmark::State& state, ModelKind kind) {
  const Data data = MakeData(state.range(0), 27);
  RegressorSpec spec = RegressorSpec::Default(kind);
  for (auto _ : state) benchmark::DoNotOptimize(Fit(spec, data.x, data.y));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_KnnPredict(benchmark::State& state) {
  const Data train = MakeData(state.range(0), 27, 1);
  const Data query = MakeData(256, 27, 2);
  const FittedModel m = FitKnn(train.x, train.y, {});
  for (auto _ : state) benchmark::DoNotOptimize(m.Predict(query.x));
  state.SetItemsProcessed(state.iterations() * 256);
}

void BM_Metrics(benchmark::State& state) {
  const Data data = MakeData(state.range(0), 2);
  const Vector yhat = data.y.array() + 0.5;
  for (auto _ : state) benchmark::DoNotOptimize(ComputeMetrics(data.y, yhat));
}

void BM_LimeExplain(benchmark::State& state) {
  const Data data = MakeData(2000, 27);
  const FittedModel m = FitKnn(data.x, data.y, {});
  const TrainingSummary summary = TrainingSummary::FromMatrix(data.x);
  const Vector x = data.x.row(0).transpose();
  const auto names = DefaultFeatureNames(27);
  LimeConfig cfg;
  cfg.n_samples = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Explain(m, x, names, summary, cfg));
}

void BM_GridSearchRidge(benchmark::State& state) {
  const Data data = MakeData(2000, 27);
  FeatureMatrix fm;
  fm.x = data.x;
  fm.y = data.y;
  fm.feature_names = DefaultFeatureNames(27);
  const FoldPlan plan = MakeFolds(2000, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(GridSearch(ModelKind::kRidge, DefaultGrid(ModelKind::kRidge), fm, plan));
  }
}

}  // namespace

BENCHMARK_CAPTURE(BM_Fit, linear, ModelKind::kLinear)->Arg(1000)->Arg(8000);
BENCHMARK_CAPTURE(BM_Fit, tree, ModelKind::kDecisionTree)->Arg(1000)->Arg(8000);
BENCHMARK_CAPTURE(BM_Fit, forest, ModelKind::kRandomForest)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Fit, gradboost, ModelKind::kGradBoost)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Fit, xgb, ModelKind::kXgbLike)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Fit, svr, ModelKind::kSvr)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KnnPredict)->Arg(1000)->Arg(10000);
BENCHMARK(BM_Metrics)->Arg(1000)->Arg(100000);
BENCHMARK(BM_LimeExplain)->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridSearchRidge)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
