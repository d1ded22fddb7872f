#ifndef EPF_LIME_H_
#define EPF_LIME_H_

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "epf/linalg.h"
#include "epf/regressors.h"

namespace epf {

struct LimeConfig {
  std::size_t n_samples = 300;
  // Gaussian kernel width; 0.75 * sqrt(d) when unset.
  std::optional<double> kernel_width;
  // Perturbation std per feature = perturb_scale * training std.
  double perturb_scale = 1.0;
  // L2 penalty on the surrogate slopes; the intercept is not penalized.
  double surrogate_l2 = 0.01;
  std::uint64_t seed = 42;
  bool discretize = true;
  std::size_t top_k = 10;

  double KernelWidthFor(std::size_t d) const;
  // kInvalidArgument unless n_samples >= d + 2, width > 0, scale > 0,
  // l2 >= 0 and top_k >= 1.
  void Validate(std::size_t d) const;
};

// Per-feature statistics of the training split.
struct TrainingSummary {
  std::vector<double> stds;  // population std
  std::vector<std::array<double, 3>> quartiles;  // 25th, 50th, 75th percentile

  // Percentiles use linear interpolation between order statistics.
  static TrainingSummary FromMatrix(const Matrix& x);
};

// Row 0 is x itself; row i > 0 adds independent N(0, (scale * stds[j])^2)
// noise to each feature. Deterministic in cfg.seed.
Matrix PerturbSamples(const Vector& x, const std::vector<double>& stds,
                      const LimeConfig& cfg);

// exp(-||x - z_i||^2 / sigma^2) per row.
Vector KernelWeights(const Vector& x, const Matrix& samples, double sigma);

struct SurrogateFit {
  double intercept = 0.0;
  Vector coefficients;
  // Weighted R^2 of the surrogate against the black box; 1 when the black
  // box is constant on the sample set.
  double local_fidelity = 1.0;
};

// Minimizes sum_i w_i (f_i - c - b'z_i)^2 + l2 * ||b||^2 with the weights
// rescaled to mean one, so only their ratios matter. Throws
// kDegenerateWeights when every weight is below 1e-300.
SurrogateFit FitSurrogate(const Matrix& samples, const Vector& preds,
                          const Vector& weights, double l2);

struct Contribution {
  std::string feature;
  std::size_t index = 0;
  double weight = 0.0;  // surrogate slope
  double value = 0.0;   // instance value
  double effect = 0.0;  // weight * value
  std::string condition;  // quartile bin, or the bare name without discretization
};

struct Explanation {
  std::string model_kind;  // empty for plain function black boxes
  Vector instance;
  std::vector<std::string> feature_names;
  double predicted = 0.0;
  double intercept = 0.0;
  // intercept + sum_j coefficients[j] * instance[j], summed in feature order.
  double surrogate_prediction = 0.0;
  double local_fidelity = 0.0;
  double kernel_width = 0.0;
  Vector coefficients;  // all features, untruncated
  std::vector<Contribution> contributions;  // by |weight| desc, at most top_k
  LimeConfig config;
};

using BlackBox = std::function<Vector(const Matrix&)>;

// Perturb, predict, weight, fit the surrogate and rank the slopes. Ties in
// |weight| keep feature order.
Explanation ExplainWith(const BlackBox& black_box, const Vector& x,
                        const std::vector<std::string>& feature_names,
                        const TrainingSummary& summary, const LimeConfig& cfg);

// Throws kDimensionMismatch when x does not match the model width.
Explanation Explain(const FittedModel& model, const Vector& x,
                    const std::vector<std::string>& feature_names,
                    const TrainingSummary& summary, const LimeConfig& cfg);

// "name <= q1", "q1 < name <= q2", "q2 < name <= q3" or "name > q3", values
// printed with two decimals.
std::string QuartileCondition(const std::string& name, double value,
                              const std::array<double, 3>& quartiles);

std::string ExplanationToJson(const Explanation& e);
// Header "condition,weight", rows in contribution order.
std::string ExplanationToCsv(const Explanation& e);
std::string LimeConfigToJson(const LimeConfig& cfg);

}  // namespace epf

#endif  // EPF_LIME_H_
