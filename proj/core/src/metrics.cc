#include "epf/metrics.h"

#include <cmath>

#include "epf/csv.h"
#include "epf/error.h"
#include "json.hpp"

namespace epf {

MetricsReport ComputeMetrics(const Vector& y, const Vector& yhat) {
  if (y.size() != yhat.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "y has " + std::to_string(y.size()) + " values, yhat " +
                    std::to_string(yhat.size()));
  }
  if (y.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "metrics need at least 2 samples");
  }
  if (!y.allFinite() || !yhat.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "metrics inputs must be finite");
  }
  const auto n = static_cast<double>(y.size());
  const double y_mean = y.mean();
  const double ss_tot = (y.array() - y_mean).square().sum();
  if (!(ss_tot > 0.0)) {
    throw Error(ErrorCode::kDegenerateTarget, "target has zero variance");
  }

  const Vector resid = y - yhat;
  MetricsReport m;
  m.n = static_cast<std::size_t>(y.size());
  m.mae = resid.cwiseAbs().sum() / n;
  const double ss_res = resid.squaredNorm();
  m.mse = ss_res / n;
  m.rmse = std::sqrt(m.mse);
  m.r2 = 1.0 - ss_res / ss_tot;

  const double r_mean = resid.mean();
  const double var_res = (resid.array() - r_mean).square().sum() / n;
  m.evs = 1.0 - var_res / (ss_tot / n);

  double ape = 0.0;
  std::size_t used = 0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (std::abs(y(i)) < kMapeZeroGuard) {
      ++m.mape_excluded;
      continue;
    }
    ape += std::abs(resid(i) / y(i));
    ++used;
  }
  m.mape = used > 0 ? ape / static_cast<double>(used)
                    : std::numeric_limits<double>::quiet_NaN();
  return m;
}

std::string MetricsCsvHeader() { return "MAE,MSE,RMSE,R2,MAPE,EVS"; }

std::string MetricsCsvFields(const MetricsReport& m) {
  return FormatDouble(m.mae) + "," + FormatDouble(m.mse) + "," +
         FormatDouble(m.rmse) + "," + FormatDouble(m.r2) + "," +
         FormatDouble(m.mape) + "," + FormatDouble(m.evs);
}

std::string MetricsToJson(const MetricsReport& m) {
  nlohmann::ordered_json j;
  j["MAE"] = m.mae;
  j["MSE"] = m.mse;
  j["RMSE"] = m.rmse;
  j["R2"] = m.r2;
  j["MAPE"] = std::isfinite(m.mape) ? nlohmann::ordered_json(m.mape) : nullptr;
  j["EVS"] = m.evs;
  j["n"] = m.n;
  j["mape_excluded"] = m.mape_excluded;
  return j.dump();
}

}  // namespace epf
