#ifndef EPF_DATA_PIPELINE_H_
#define EPF_DATA_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "epf/csv.h"
#include "epf/linalg.h"
#include "epf/time_table.h"

namespace epf {

// ---------------------------------------------------------------------------
// Loading
// ---------------------------------------------------------------------------

struct LoadOptions {
  // Offset applied to timestamps that carry none, minutes east of UTC.
  int source_utc_offset_minutes = 0;
  // Overrides timestamp column auto-detection (time, timestamp, datetime,
  // date_time, dt_iso, date; case-insensitive).
  std::optional<std::string> timestamp_column;
  // Overrides city column auto-detection (city_name, city).
  std::optional<std::string> city_column;
};

// Wide energy table: every non-timestamp column holding at least one numeric
// cell becomes a column with provenance "energy"; columns with no numeric cell
// at all (free text, entirely blank) are dropped. Unparseable cells become
// missing. Rows are sorted by timestamp and duplicate timestamps keep the last
// occurrence in file order.
TimeTable LoadEnergyCsv(const std::filesystem::path& path,
                        const LoadOptions& options = {});
TimeTable EnergyTableFromCsv(const CsvDocument& doc, std::string_view source,
                             const LoadOptions& options = {});

// Long-format weather (one row per city and hour) pivoted to wide columns
// named "<city>_<variable>" with provenance "weather:<city>". Cities appear in
// lexicographic order, variables in header order. A (city, hour) pair seen
// twice keeps the last row.
TimeTable LoadWeatherCsv(const std::filesystem::path& path,
                         const LoadOptions& options = {});
TimeTable WeatherTableFromCsv(const CsvDocument& doc, std::string_view source,
                              const LoadOptions& options = {});

// ---------------------------------------------------------------------------
// Integration and time alignment
// ---------------------------------------------------------------------------

// Inner join on exact timestamp equality; energy columns first.
TimeTable MergeOnTimestamp(const TimeTable& energy, const TimeTable& weather);

// Inserts all-missing rows for absent hours between the first and last
// timestamp.
TimeTable CompleteHourlyGrid(const TimeTable& table);

// Appends hour (0-23), day_of_week (0-6, Monday = 0), month (1-12) and
// day_of_month (1-31), provenance "derived".
TimeTable DeriveTimeFeatures(const TimeTable& table);

// ---------------------------------------------------------------------------
// Imputation
// ---------------------------------------------------------------------------

struct ImputationPolicy {
  // Weather gaps up to this many consecutive hours are interpolated linearly;
  // longer gaps are forward-filled.
  int max_interp_gap = 6;
};

struct ImputeResult {
  TimeTable table;
  // Cells filled per column, aligned with table.columns().
  std::vector<std::size_t> imputed_counts;
};

// Weather columns: linear interpolation across short interior gaps, forward
// fill otherwise. Energy and derived columns: forward fill. Leading gaps in
// either fall back to the column mean of observed values. Requires an hourly
// grid (see CompleteHourlyGrid).
ImputeResult ImputeMissing(const TimeTable& table,
                           const ImputationPolicy& policy = {});

// ---------------------------------------------------------------------------
// Feature selection
// ---------------------------------------------------------------------------

struct ColumnCorrelation {
  std::string name;
  double pearson_r;
};

struct FeatureSpec {
  // Ordered by descending |r|, ties by name.
  std::vector<std::string> selected;
  // Every ranked candidate, same order as the ranking (selected first).
  std::vector<ColumnCorrelation> correlations;
  std::string target_name;
};

double PearsonCorrelation(const std::vector<double>& a,
                          const std::vector<double>& b);

// Ranks non-target, non-constant columns by |Pearson r| with the target and
// keeps the top k. Columns named in `exclude` never become candidates.
FeatureSpec SelectFeatures(const TimeTable& table, std::string_view target_name,
                           std::size_t k,
                           const std::vector<std::string>& exclude = {});

// ---------------------------------------------------------------------------
// Matrix assembly, scaling and splitting
// ---------------------------------------------------------------------------

struct ScalerParams {
  std::vector<double> means;
  // Population standard deviations, all strictly positive.
  std::vector<double> stds;
};

struct FeatureMatrix {
  Matrix x;
  // Target in price units; never standardized.
  Vector y;
  std::vector<std::string> feature_names;
  std::vector<Timestamp> timestamps;
  std::string target_name;
  // Present once the matrix has been standardized.
  std::optional<ScalerParams> scaler;

  std::size_t rows() const { return static_cast<std::size_t>(x.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(x.cols()); }
};

// Raw (unscaled) matrix of the selected columns plus the target. The table
// must be fully imputed.
FeatureMatrix BuildFeatureMatrix(const TimeTable& table,
                                 const FeatureSpec& spec);

FeatureMatrix TakeRows(const FeatureMatrix& m,
                       const std::vector<std::size_t>& rows);

// Fits per-feature mean and population std on the given (training) rows.
ScalerParams StandardizeFit(const FeatureMatrix& train,
                            const FeatureSpec& spec);
// (x - mean) / std per column; records the params on the result.
FeatureMatrix StandardizeApply(const ScalerParams& params,
                               const FeatureMatrix& m);
// x * std + mean per column.
FeatureMatrix StandardizeInvert(const ScalerParams& params,
                                const FeatureMatrix& m);

enum class SplitMode { kChronological, kRandom };

struct TrainTestSplit {
  FeatureMatrix train;
  FeatureMatrix test;
};

// First floor(n * train_fraction) rows train, the rest test.
TrainTestSplit ChronologicalSplit(const FeatureMatrix& m,
                                  double train_fraction);
// Seeded uniform assignment of floor(n * train_fraction) rows to train; both
// sides keep their rows in time order.
TrainTestSplit RandomSplit(const FeatureMatrix& m, double train_fraction,
                           std::uint64_t seed);

// ---------------------------------------------------------------------------
// End-to-end
// ---------------------------------------------------------------------------

struct PipelineConfig {
  std::string target_column = "price actual";
  std::size_t feature_count = 27;
  double train_fraction = 0.8;
  int max_interp_gap = 6;
  SplitMode split_mode = SplitMode::kChronological;
  std::uint64_t seed = 42;
  int source_utc_offset_minutes = 0;
  // The TSO's own day-ahead price is a forecast of the target, not a driver.
  std::vector<std::string> exclude_columns = {"price day ahead"};
};

struct PipelineSummary {
  std::size_t energy_rows = 0;
  std::size_t weather_rows = 0;
  std::size_t merged_rows = 0;
  std::size_t grid_rows = 0;
  std::size_t inserted_rows = 0;
  std::vector<std::string> imputed_columns;
  std::vector<std::size_t> imputed_counts;
};

struct PipelineResult {
  FeatureSpec spec;
  ScalerParams scaler;
  // Standardized.
  FeatureMatrix train;
  FeatureMatrix test;
  PipelineSummary summary;
};

PipelineResult RunPipeline(const TimeTable& energy, const TimeTable& weather,
                           const PipelineConfig& config);

}  // namespace epf

#endif  // EPF_DATA_PIPELINE_H_
