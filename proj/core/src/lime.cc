#include "epf/lime.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "epf/csv.h"
#include "epf/error.h"
#include "epf/random.h"
#include "json.hpp"

namespace epf {

namespace {

[[noreturn]] void BadConfig(const std::string& what) {
  throw Error(ErrorCode::kInvalidArgument, "LIME: " + what);
}

std::string TwoDecimals(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  std::string s(buf);
  if (s == "-0.00") s = "0.00";
  return s;
}

double Percentile(const std::vector<double>& sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

double LimeConfig::KernelWidthFor(std::size_t d) const {
  return kernel_width ? *kernel_width : 0.75 * std::sqrt(static_cast<double>(d));
}

void LimeConfig::Validate(std::size_t d) const {
  if (n_samples < d + 2) {
    BadConfig("n_samples must be at least d + 2 = " + std::to_string(d + 2));
  }
  const double width = KernelWidthFor(d);
  if (!(width > 0.0) || !std::isfinite(width)) BadConfig("kernel_width must be > 0");
  if (!(perturb_scale > 0.0) || !std::isfinite(perturb_scale)) {
    BadConfig("perturb_scale must be > 0");
  }
  if (!(surrogate_l2 >= 0.0) || !std::isfinite(surrogate_l2)) {
    BadConfig("surrogate_l2 must be >= 0");
  }
  if (top_k < 1) BadConfig("top_k must be >= 1");
}

TrainingSummary TrainingSummary::FromMatrix(const Matrix& x) {
  if (x.rows() == 0) BadConfig("training summary needs at least one row");
  TrainingSummary s;
  const auto n = static_cast<double>(x.rows());
  std::vector<double> col(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) col[static_cast<std::size_t>(i)] = x(i, j);
    const double mean = std::accumulate(col.begin(), col.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : col) ss += (v - mean) * (v - mean);
    s.stds.push_back(std::sqrt(ss / n));
    std::sort(col.begin(), col.end());
    s.quartiles.push_back({Percentile(col, 0.25), Percentile(col, 0.5), Percentile(col, 0.75)});
  }
  return s;
}

Matrix PerturbSamples(const Vector& x, const std::vector<double>& stds,
                      const LimeConfig& cfg) {
  const auto d = static_cast<std::size_t>(x.size());
  if (stds.size() != d) {
    throw Error(ErrorCode::kDimensionMismatch, "one std per feature required");
  }
  for (double s : stds) {
    if (!(s > 0.0) || !std::isfinite(s)) BadConfig("feature stds must be positive");
  }
  if (cfg.n_samples == 0) BadConfig("n_samples must be positive");
  Rng rng(cfg.seed);
  Matrix z(static_cast<Eigen::Index>(cfg.n_samples), x.size());
  z.row(0) = x.transpose();
  for (Eigen::Index i = 1; i < z.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      z(i, j) = x(j) + cfg.perturb_scale * stds[static_cast<std::size_t>(j)] * rng.Normal();
    }
  }
  return z;
}

Vector KernelWeights(const Vector& x, const Matrix& samples, double sigma) {
  if (!(sigma > 0.0)) BadConfig("kernel width must be > 0");
  if (samples.cols() != x.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "sample width differs from instance");
  }
  Vector w(samples.rows());
  const double s2 = sigma * sigma;
  for (Eigen::Index i = 0; i < samples.rows(); ++i) {
    const double d2 = (samples.row(i).transpose() - x).squaredNorm();
    w(i) = std::exp(-d2 / s2);
  }
  return w;
}

SurrogateFit FitSurrogate(const Matrix& samples, const Vector& preds,
                          const Vector& weights, double l2) {
  const Eigen::Index n = samples.rows();
  const Eigen::Index d = samples.cols();
  if (preds.size() != n || weights.size() != n) {
    throw Error(ErrorCode::kLengthMismatch, "samples, predictions and weights differ in length");
  }
  if (!(l2 >= 0.0)) BadConfig("surrogate_l2 must be >= 0");
  if (n == 0 || weights.maxCoeff() < 1e-300) {
    throw Error(ErrorCode::kDegenerateWeights, "all kernel weights vanish");
  }
  if ((weights.array() < 0.0).any()) BadConfig("weights must be non-negative");

  const Vector w = weights / weights.mean();
  const double w_sum = w.sum();
  const Eigen::RowVectorXd z_mean = (w.transpose() * samples) / w_sum;
  const double f_mean = w.dot(preds) / w_sum;

  const Vector sqrt_w = w.cwiseSqrt();
  Eigen::MatrixXd a(n + d, d);
  a.topRows(n) = (samples.rowwise() - z_mean).array().colwise() * sqrt_w.array();
  a.bottomRows(d) = std::sqrt(l2) * Eigen::MatrixXd::Identity(d, d);
  Vector b = Vector::Zero(n + d);
  b.head(n) = (preds.array() - f_mean) * sqrt_w.array();

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  SurrogateFit fit;
  fit.coefficients = qr.solve(b);
  fit.intercept = f_mean - z_mean.dot(fit.coefficients);

  const Vector g = (samples * fit.coefficients).array() + fit.intercept;
  const double sse = w.dot((preds - g).cwiseAbs2());
  const double sst = w.dot((preds.array() - f_mean).square().matrix());
  // A flat black box has nothing to explain; rounding in f_mean must not
  // turn that into fidelity 0.
  const double spread = (preds.array() - f_mean).abs().maxCoeff();
  const bool flat = spread <= 1e-12 * std::max(1.0, std::abs(f_mean));
  fit.local_fidelity = flat || !(sst > 0.0) ? 1.0 : 1.0 - sse / sst;
  return fit;
}

std::string QuartileCondition(const std::string& name, double value,
                              const std::array<double, 3>& q) {
  if (value <= q[0]) return name + " <= " + TwoDecimals(q[0]);
  if (value <= q[1]) return TwoDecimals(q[0]) + " < " + name + " <= " + TwoDecimals(q[1]);
  if (value <= q[2]) return TwoDecimals(q[1]) + " < " + name + " <= " + TwoDecimals(q[2]);
  return name + " > " + TwoDecimals(q[2]);
}

Explanation ExplainWith(const BlackBox& black_box, const Vector& x,
                        const std::vector<std::string>& feature_names,
                        const TrainingSummary& summary, const LimeConfig& cfg) {
  const auto d = static_cast<std::size_t>(x.size());
  cfg.Validate(d);
  if (feature_names.size() != d || summary.stds.size() != d ||
      summary.quartiles.size() != d) {
    throw Error(ErrorCode::kDimensionMismatch,
                "instance, names and training summary must have equal width");
  }
  if (!x.allFinite()) BadConfig("instance must be finite");

  Explanation e;
  e.instance = x;
  e.feature_names = feature_names;
  e.config = cfg;
  e.kernel_width = cfg.KernelWidthFor(d);

  const Matrix z = PerturbSamples(x, summary.stds, cfg);
  const Vector f = black_box(z);
  if (f.size() != z.rows() || !f.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "black box returned unusable predictions");
  }
  const Vector w = KernelWeights(x, z, e.kernel_width);
  const SurrogateFit fit = FitSurrogate(z, f, w, cfg.surrogate_l2);

  e.predicted = f(0);
  e.intercept = fit.intercept;
  e.coefficients = fit.coefficients;
  e.local_fidelity = fit.local_fidelity;
  e.surrogate_prediction = fit.intercept;
  for (std::size_t j = 0; j < d; ++j) {
    e.surrogate_prediction += fit.coefficients(static_cast<Eigen::Index>(j)) *
                              x(static_cast<Eigen::Index>(j));
  }

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(fit.coefficients(static_cast<Eigen::Index>(a))) >
           std::abs(fit.coefficients(static_cast<Eigen::Index>(b)));
  });
  order.resize(std::min(cfg.top_k, d));
  for (std::size_t j : order) {
    const auto jj = static_cast<Eigen::Index>(j);
    Contribution c;
    c.feature = feature_names[j];
    c.index = j;
    c.weight = fit.coefficients(jj);
    c.value = x(jj);
    c.effect = c.weight * c.value;
    c.condition = cfg.discretize
                      ? QuartileCondition(c.feature, c.value, summary.quartiles[j])
                      : c.feature;
    e.contributions.push_back(std::move(c));
  }
  return e;
}

Explanation Explain(const FittedModel& model, const Vector& x,
                    const std::vector<std::string>& feature_names,
                    const TrainingSummary& summary, const LimeConfig& cfg) {
  if (static_cast<std::size_t>(x.size()) != model.feature_count()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "instance has " + std::to_string(x.size()) + " features, model expects " +
                    std::to_string(model.feature_count()));
  }
  Explanation e = ExplainWith([&](const Matrix& z) { return model.Predict(z); }, x,
                              feature_names, summary, cfg);
  e.model_kind = std::string(ModelKindName(model.kind()));
  return e;
}

std::string LimeConfigToJson(const LimeConfig& cfg) {
  nlohmann::ordered_json j;
  j["n_samples"] = cfg.n_samples;
  j["kernel_width"] = cfg.kernel_width ? nlohmann::ordered_json(*cfg.kernel_width) : nullptr;
  j["perturb_scale"] = cfg.perturb_scale;
  j["surrogate_l2"] = cfg.surrogate_l2;
  j["seed"] = cfg.seed;
  j["discretize"] = cfg.discretize;
  j["top_k"] = cfg.top_k;
  return j.dump();
}

std::string ExplanationToJson(const Explanation& e) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["schema_id"] = "epf.explanation/1";
  j["model_kind"] = e.model_kind;
  j["predicted"] = e.predicted;
  j["intercept"] = e.intercept;
  j["surrogate_prediction"] = e.surrogate_prediction;
  j["local_fidelity"] = e.local_fidelity;
  j["kernel_width"] = e.kernel_width;
  j["config"] = ordered_json::parse(LimeConfigToJson(e.config));
  ordered_json contributions = ordered_json::array();
  for (const auto& c : e.contributions) {
    contributions.push_back({{"feature", c.feature},
                             {"condition", c.condition},
                             {"weight", c.weight},
                             {"value", c.value},
                             {"effect", c.effect}});
  }
  j["contributions"] = std::move(contributions);
  ordered_json features = ordered_json::array();
  for (std::size_t k = 0; k < e.feature_names.size(); ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    features.push_back({{"feature", e.feature_names[k]},
                        {"value", e.instance(kk)},
                        {"weight", e.coefficients(kk)}});
  }
  j["features"] = std::move(features);
  return j.dump(1) + "\n";
}

std::string ExplanationToCsv(const Explanation& e) {
  std::string out = "condition,weight\n";
  for (const auto& c : e.contributions) {
    out += CsvEscape(c.condition) + "," + FormatDouble(c.weight) + "\n";
  }
  return out;
}

}  // namespace epf
