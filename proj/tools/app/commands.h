#ifndef EPF_TOOLS_COMMANDS_H_
#define EPF_TOOLS_COMMANDS_H_

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "config.h"

namespace epf::app {

// File names inside RunConfig::output_dir.
namespace files {
inline constexpr const char* kTrainMatrix = "train.matrix.json";
inline constexpr const char* kTestMatrix = "test.matrix.json";
inline constexpr const char* kTrainCsv = "train.csv";
inline constexpr const char* kTestCsv = "test.csv";
inline constexpr const char* kFeatureSpec = "feature_spec.json";
inline constexpr const char* kScaler = "scaler.json";
inline constexpr const char* kPreprocessSummary = "preprocess_summary.txt";
inline constexpr const char* kPreprocessSummaryJson = "preprocess_summary.json";
inline constexpr const char* kBenchmarkCsv = "benchmark.csv";
inline constexpr const char* kBenchmarkJson = "benchmark.json";
inline constexpr const char* kBenchmarkTimings = "benchmark_timings.csv";
inline constexpr const char* kModelsDir = "models";
inline constexpr const char* kExplanationJson = "explanation.json";
inline constexpr const char* kExplanationCsv = "explanation.csv";
inline constexpr const char* kScatterCsv = "plot_scatter.csv";
inline constexpr const char* kSeriesCsv = "plot_series.csv";
inline constexpr const char* kHistogramCsv = "plot_histogram.csv";
}  // namespace files

// "<command>.config.json"
std::filesystem::path EchoPath(const RunConfig& cfg, const std::string& command);
// models/<Kind>.model.json
std::filesystem::path ModelPath(const RunConfig& cfg, ModelKind kind);

// Runs the full preprocessing flow on the configured CSVs and writes the
// matrices, feature spec, scaler and summaries.
void CmdPreprocess(const RunConfig& cfg, std::ostream& log);

// Fits every configured model on the training matrix, scores it on the test
// matrix and writes the metrics table, per-model timings and the models. A
// failing model becomes an NA row.
void CmdBenchmark(const RunConfig& cfg, std::ostream& log);

// Grid search with cross-validation on the training matrix.
void CmdTune(const RunConfig& cfg, ModelKind kind, std::ostream& log);

struct ExplainRequest {
  // Defaults to the benchmark's KNN model.
  std::optional<std::filesystem::path> model_file;
  // Row of the test matrix.
  std::optional<std::size_t> row_index;
  // CSV with a header naming the features (extra columns ignored); the first
  // data row is taken in raw units and standardized with the stored scaler.
  std::optional<std::filesystem::path> row_file;
};

void CmdExplain(const RunConfig& cfg, const ExplainRequest& request,
                std::ostream& log);

// Scatter, first-steps series and error histogram for the test matrix.
void CmdPlotData(const RunConfig& cfg,
                 const std::optional<std::filesystem::path>& model_file,
                 std::ostream& log);

struct HistogramBin {
  double left = 0.0;
  double right = 0.0;
  std::size_t count = 0;
};

// Fixed-width bins starting at floor(min / width) * width and covering the
// maximum; the last bin is closed on the right.
std::vector<HistogramBin> ErrorHistogram(const std::vector<double>& errors,
                                         double width);

}  // namespace epf::app

#endif  // EPF_TOOLS_COMMANDS_H_
