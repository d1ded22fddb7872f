#ifndef EPF_METRICS_H_
#define EPF_METRICS_H_

#include <cstddef>
#include <string>

#include "epf/linalg.h"

namespace epf {

struct MetricsReport {
  double mae = 0.0;
  double mse = 0.0;
  double rmse = 0.0;
  double r2 = 0.0;
  // Fraction, not percent. Rows with |y| < kMapeZeroGuard are skipped.
  double mape = 0.0;
  double evs = 0.0;
  std::size_t n = 0;
  std::size_t mape_excluded = 0;
};

inline constexpr double kMapeZeroGuard = 1e-9;

// Requires equal lengths, n >= 2 and finite values (kLengthMismatch,
// kInvalidArgument) and a non-constant y (kDegenerateTarget). Variances are
// population variances. MAPE is NaN when every target is excluded.
MetricsReport ComputeMetrics(const Vector& y, const Vector& yhat);

// "MAE,MSE,RMSE,R2,MAPE,EVS"
std::string MetricsCsvHeader();
// Values in header order, shortest round-trip formatting.
std::string MetricsCsvFields(const MetricsReport& m);
// {"MAE":...,"MSE":...,...,"n":...,"mape_excluded":...}
std::string MetricsToJson(const MetricsReport& m);

}  // namespace epf

#endif  // EPF_METRICS_H_
