#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "epf/error.h"
#include "epf/regressors.h"

namespace epf {

FittedModel FitKnn(const Matrix& x, const Vector& y, const KnnParams& params) {
  RegressorSpec spec{params};
  spec.Validate();
  if (x.rows() != y.size()) {
    throw Error(ErrorCode::kLengthMismatch, "X and y row counts differ");
  }
  if (x.rows() == 0) {
    throw Error(ErrorCode::kEmptyTrainingSet, "no training rows");
  }
  if (params.k > x.rows()) {
    throw Error(ErrorCode::kKExceedsN,
                "k = " + std::to_string(params.k) + " exceeds " +
                    std::to_string(x.rows()) + " training rows");
  }
  return FittedModel(spec, KnnState{x, y}, DefaultFeatureNames(x.cols()));
}

double KnnPredictOne(const KnnState& state, const KnnParams& params,
                     const double* query) {
  const Eigen::Index n = state.x.rows();
  const Eigen::Index d = state.x.cols();
  // (squared distance, row); pair ordering breaks distance ties by row index.
  std::vector<std::pair<double, Eigen::Index>> dist(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const double* row = state.x.row(i).data();
    double s = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      const double diff = row[j] - query[j];
      s += diff * diff;
    }
    dist[static_cast<std::size_t>(i)] = {s, i};
  }
  const auto k = static_cast<std::size_t>(params.k);
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k),
                    dist.end());

  if (params.weighting == KnnWeighting::kUniform) {
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) sum += state.y(dist[i].second);
    return sum / static_cast<double>(k);
  }
  if (dist[0].first == 0.0) {
    double sum = 0.0;
    std::size_t zeros = 0;
    for (std::size_t i = 0; i < k && dist[i].first == 0.0; ++i) {
      sum += state.y(dist[i].second);
      ++zeros;
    }
    return sum / static_cast<double>(zeros);
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double w = 1.0 / std::sqrt(dist[i].first);
    num += w * state.y(dist[i].second);
    den += w;
  }
  return num / den;
}

}  // namespace epf
