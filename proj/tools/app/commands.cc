#include "commands.h"

#include <chrono>
#include <cmath>
#include <cstdio>

#include "epf/csv.h"
#include "epf/error.h"
#include "epf/feature_io.h"
#include "epf/metrics.h"
#include "epf/model_io.h"
#include "json.hpp"

namespace epf::app {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

void Write(const fs::path& path, const std::string& content, std::ostream& log) {
  WriteFileAtomic(path, content);
  log << "  wrote " << path.string() << "\n";
}

void EchoConfig(const RunConfig& cfg, const std::string& command, std::ostream& log) {
  Write(EchoPath(cfg, command), RunConfigToJson(cfg), log);
}

FeatureMatrix LoadMatrix(const RunConfig& cfg, const char* name) {
  const fs::path path = cfg.output_dir / name;
  try {
    return ParseFeatureMatrix(ReadTextFile(path));
  } catch (const Error& e) {
    throw e.WithContext(path.string() + " (run preprocess first)");
  }
}

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

double Seconds(std::chrono::steady_clock::duration d) {
  return std::chrono::duration<double>(d).count();
}

fs::path ResolveModel(const RunConfig& cfg, const std::optional<fs::path>& model_file) {
  return model_file ? *model_file : ModelPath(cfg, ModelKind::kKnn);
}

}  // namespace

fs::path EchoPath(const RunConfig& cfg, const std::string& command) {
  return cfg.output_dir / (command + ".config.json");
}

fs::path ModelPath(const RunConfig& cfg, ModelKind kind) {
  return cfg.output_dir / files::kModelsDir /
         (std::string(ModelKindName(kind)) + ".model.json");
}

void CmdPreprocess(const RunConfig& cfg, std::ostream& log) {
  if (cfg.energy_csv.empty() || cfg.weather_csv.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "energy and weather CSV paths are required");
  }
  LoadOptions load;
  load.source_utc_offset_minutes = cfg.pipeline.source_utc_offset_minutes;
  log << "preprocess: loading " << cfg.energy_csv.string() << "\n";
  const TimeTable energy = LoadEnergyCsv(cfg.energy_csv, load);
  log << "preprocess: loading " << cfg.weather_csv.string() << "\n";
  const TimeTable weather = LoadWeatherCsv(cfg.weather_csv, load);
  const PipelineResult result = RunPipeline(energy, weather, cfg.pipeline);

  Write(cfg.output_dir / files::kTrainMatrix, SerializeFeatureMatrix(result.train), log);
  Write(cfg.output_dir / files::kTestMatrix, SerializeFeatureMatrix(result.test), log);
  if (cfg.write_csv) {
    Write(cfg.output_dir / files::kTrainCsv, FeatureMatrixToCsv(result.train), log);
    Write(cfg.output_dir / files::kTestCsv, FeatureMatrixToCsv(result.test), log);
  }
  Write(cfg.output_dir / files::kFeatureSpec, SerializeFeatureSpec(result.spec), log);
  Write(cfg.output_dir / files::kScaler,
        SerializeScaler(result.scaler, result.spec.selected), log);

  const PipelineSummary& s = result.summary;
  std::string text;
  text += "energy rows:        " + std::to_string(s.energy_rows) + "\n";
  text += "weather rows:       " + std::to_string(s.weather_rows) + " (wide)\n";
  text += "merged rows:        " + std::to_string(s.merged_rows) + "\n";
  text += "hourly grid rows:   " + std::to_string(s.grid_rows) + " (" +
          std::to_string(s.inserted_rows) + " inserted)\n";
  text += "train rows:         " + std::to_string(result.train.rows()) + "\n";
  text += "test rows:          " + std::to_string(result.test.rows()) + "\n";
  text += "target:             " + result.spec.target_name + "\n";
  text += "selected features:  " + std::to_string(result.spec.selected.size()) + "\n";
  for (std::size_t i = 0; i < result.spec.selected.size(); ++i) {
    text += "  " + std::to_string(i + 1) + ". " + result.spec.selected[i] + "  r = " +
            Fixed(result.spec.correlations[i].pearson_r, 4) + "\n";
  }
  text += "imputed cells per column:\n";
  for (std::size_t i = 0; i < s.imputed_columns.size(); ++i) {
    if (s.imputed_counts[i] == 0) continue;
    text += "  " + s.imputed_columns[i] + ": " + std::to_string(s.imputed_counts[i]) + "\n";
  }
  Write(cfg.output_dir / files::kPreprocessSummary, text, log);

  if (cfg.write_json) {
    ordered_json j;
    j["energy_rows"] = s.energy_rows;
    j["weather_rows"] = s.weather_rows;
    j["merged_rows"] = s.merged_rows;
    j["grid_rows"] = s.grid_rows;
    j["inserted_rows"] = s.inserted_rows;
    j["train_rows"] = result.train.rows();
    j["test_rows"] = result.test.rows();
    j["target"] = result.spec.target_name;
    ordered_json sel = ordered_json::array();
    for (std::size_t i = 0; i < result.spec.selected.size(); ++i) {
      sel.push_back({{"feature", result.spec.selected[i]},
                     {"pearson_r", result.spec.correlations[i].pearson_r}});
    }
    j["selected"] = std::move(sel);
    ordered_json imp = ordered_json::object();
    for (std::size_t i = 0; i < s.imputed_columns.size(); ++i) {
      imp[s.imputed_columns[i]] = s.imputed_counts[i];
    }
    j["imputed_counts"] = std::move(imp);
    Write(cfg.output_dir / files::kPreprocessSummaryJson, j.dump(1) + "\n", log);
  }
  EchoConfig(cfg, "preprocess", log);
  log << "preprocess: " << result.train.rows() << " train rows, " << result.test.rows()
      << " test rows, " << result.spec.selected.size() << " features\n";
}

void CmdBenchmark(const RunConfig& cfg, std::ostream& log) {
  const FeatureMatrix train = LoadMatrix(cfg, files::kTrainMatrix);
  const FeatureMatrix test = LoadMatrix(cfg, files::kTestMatrix);

  std::string table = "Model," + MetricsCsvHeader() + "\n";
  std::string timings = "Model,status,fit_seconds,predict_seconds\n";
  ordered_json rows = ordered_json::array();

  for (ModelKind kind : cfg.benchmark_models) {
    const std::string label(ModelDisplayName(kind));
    log << "benchmark: " << label << " ... " << std::flush;
    const RegressorSpec spec = cfg.spec(kind);
    ordered_json row;
    row["model"] = label;
    row["kind"] = ModelKindName(kind);
    row["params"] = ordered_json::parse(HyperparamsToJson(spec.params));
    double fit_s = 0.0, predict_s = 0.0;
    try {
      const auto t0 = std::chrono::steady_clock::now();
      const FittedModel model = Fit(spec, train.x, train.y, train.feature_names);
      const auto t1 = std::chrono::steady_clock::now();
      const Vector pred = model.Predict(test.x);
      const auto t2 = std::chrono::steady_clock::now();
      fit_s = Seconds(t1 - t0);
      predict_s = Seconds(t2 - t1);
      const MetricsReport m = ComputeMetrics(test.y, pred);
      SaveModel(model, ModelPath(cfg, kind));
      table += label + "," + MetricsCsvFields(m) + "\n";
      row["status"] = "ok";
      row["metrics"] = ordered_json::parse(MetricsToJson(m));
      if (const auto* svr = std::get_if<SvrState>(&model.state())) {
        row["svr"] = {{"converged", svr->converged},
                      {"final_violation", svr->final_violation},
                      {"iterations", svr->iterations},
                      {"rows_used", svr->rows_used},
                      {"rows_total", svr->rows_total},
                      {"support_vectors", svr->support.rows()}};
        if (!svr->converged) row["status"] = "not_converged";
      }
      timings += label + "," + row["status"].get<std::string>() + "," +
                 Fixed(fit_s, 6) + "," + Fixed(predict_s, 6) + "\n";
      log << "RMSE " << Fixed(m.rmse, 4) << ", R2 " << Fixed(m.r2, 4) << "\n";
    } catch (const Error& e) {
      table += label + ",NA,NA,NA,NA,NA,NA\n";
      row["status"] = "error";
      row["error"] = {{"code", ErrorCodeName(e.code())}, {"message", e.what()}};
      timings += label + ",error,NA,NA\n";
      log << "failed: " << e.what() << "\n";
    }
    rows.push_back(std::move(row));
  }

  if (cfg.write_csv) Write(cfg.output_dir / files::kBenchmarkCsv, table, log);
  if (cfg.write_json) {
    ordered_json j;
    j["schema_id"] = "epf.benchmark/1";
    j["train_rows"] = train.rows();
    j["test_rows"] = test.rows();
    j["features"] = train.cols();
    j["models"] = std::move(rows);
    Write(cfg.output_dir / files::kBenchmarkJson, j.dump(1) + "\n", log);
  }
  Write(cfg.output_dir / files::kBenchmarkTimings, timings, log);
  EchoConfig(cfg, "benchmark", log);
}

void CmdTune(const RunConfig& cfg, ModelKind kind, std::ostream& log) {
  const FeatureMatrix train = LoadMatrix(cfg, files::kTrainMatrix);
  const auto grid = cfg.grid(kind);
  log << "tune: " << ModelKindName(kind) << ", " << grid.size() << " candidates x "
      << cfg.cv_folds << " folds (" << FoldModeName(cfg.cv_mode) << ")\n";
  const FoldPlan plan = MakeFolds(train.rows(), cfg.cv_folds, cfg.cv_mode, cfg.pipeline.seed);
  const GridResult result = GridSearch(kind, grid, train, plan, cfg.pipeline.seed);
  const std::string stem = "tune_" + std::string(ModelKindName(kind));
  if (cfg.write_csv) Write(cfg.output_dir / (stem + ".csv"), GridResultToCsv(result), log);
  if (cfg.write_json) {
    Write(cfg.output_dir / (stem + ".json"), GridSummaryToJson(result), log);
  }
  EchoConfig(cfg, "tune", log);
  log << "tune: winner " << DescribeHyperparams(result.winner().params) << " (mean RMSE "
      << Fixed(result.winner().mean_rmse, 4) << ")\n";
}

void CmdExplain(const RunConfig& cfg, const ExplainRequest& request, std::ostream& log) {
  const fs::path model_path = ResolveModel(cfg, request.model_file);
  const FittedModel model = LoadModel(model_path);
  const FeatureMatrix train = LoadMatrix(cfg, files::kTrainMatrix);
  const FeatureMatrix test = LoadMatrix(cfg, files::kTestMatrix);
  if (model.feature_names() != train.feature_names) {
    throw Error(ErrorCode::kDimensionMismatch,
                model_path.string() + ": model features differ from the training matrix");
  }

  Vector x;
  if (request.row_file) {
    const CsvDocument doc = ReadCsv(*request.row_file);
    if (doc.rows.empty()) {
      throw Error(ErrorCode::kRowOutOfRange, request.row_file->string() + ": no data row");
    }
    if (!test.scaler) {
      throw Error(ErrorCode::kSchemaMismatch, "test matrix carries no scaler");
    }
    x.resize(static_cast<Eigen::Index>(train.cols()));
    for (std::size_t j = 0; j < train.cols(); ++j) {
      const auto it = std::find(doc.header.begin(), doc.header.end(), train.feature_names[j]);
      if (it == doc.header.end()) {
        throw Error(ErrorCode::kDimensionMismatch, request.row_file->string() +
                                                       ": missing column '" +
                                                       train.feature_names[j] + "'");
      }
      const auto col = static_cast<std::size_t>(it - doc.header.begin());
      const auto v = col < doc.rows[0].size() ? ParseNumber(doc.rows[0][col]) : std::nullopt;
      if (!v) {
        throw Error(ErrorCode::kMalformedRow, request.row_file->string() + ": column '" +
                                                  train.feature_names[j] + "' is not numeric");
      }
      x(static_cast<Eigen::Index>(j)) = (*v - test.scaler->means[j]) / test.scaler->stds[j];
    }
  } else {
    const std::size_t row = request.row_index.value_or(0);
    if (row >= test.rows()) {
      throw Error(ErrorCode::kRowOutOfRange,
                  "row " + std::to_string(row) + " outside the " +
                      std::to_string(test.rows()) + "-row test matrix");
    }
    x = test.x.row(static_cast<Eigen::Index>(row)).transpose();
  }

  const TrainingSummary summary = TrainingSummary::FromMatrix(train.x);
  const Explanation e = Explain(model, x, train.feature_names, summary, cfg.lime);
  if (cfg.write_json) Write(cfg.output_dir / files::kExplanationJson, ExplanationToJson(e), log);
  if (cfg.write_csv) Write(cfg.output_dir / files::kExplanationCsv, ExplanationToCsv(e), log);
  EchoConfig(cfg, "explain", log);
  log << "explain: " << e.model_kind << " predicts " << Fixed(e.predicted, 4)
      << ", local fidelity " << Fixed(e.local_fidelity, 4) << "\n";
  for (const auto& c : e.contributions) {
    log << "  " << c.condition << "  " << Fixed(c.weight, 4) << "\n";
  }
}

std::vector<HistogramBin> ErrorHistogram(const std::vector<double>& errors, double width) {
  if (!(width > 0.0)) throw Error(ErrorCode::kInvalidArgument, "bin width must be > 0");
  if (errors.empty()) return {};
  const auto [lo_it, hi_it] = std::minmax_element(errors.begin(), errors.end());
  const double left0 = std::floor(*lo_it / width) * width;
  const auto bins = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil((*hi_it - left0) / width)));
  std::vector<HistogramBin> out(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    out[b].left = left0 + static_cast<double>(b) * width;
    out[b].right = left0 + static_cast<double>(b + 1) * width;
  }
  for (double e : errors) {
    auto b = static_cast<std::size_t>(std::floor((e - left0) / width));
    ++out[std::min(b, bins - 1)].count;
  }
  return out;
}

void CmdPlotData(const RunConfig& cfg, const std::optional<fs::path>& model_file,
                 std::ostream& log) {
  const FittedModel model = LoadModel(ResolveModel(cfg, model_file));
  const FeatureMatrix test = LoadMatrix(cfg, files::kTestMatrix);
  const Vector pred = model.Predict(test.x);

  std::string scatter = "actual,predicted\n";
  std::string series = "timestamp,actual,predicted\n";
  std::vector<double> errors;
  for (Eigen::Index i = 0; i < test.y.size(); ++i) {
    scatter += FormatDouble(test.y(i)) + "," + FormatDouble(pred(i)) + "\n";
    if (static_cast<std::size_t>(i) < cfg.series_length) {
      series += FormatIso8601(test.timestamps[static_cast<std::size_t>(i)]) + "," +
                FormatDouble(test.y(i)) + "," + FormatDouble(pred(i)) + "\n";
    }
    errors.push_back(test.y(i) - pred(i));
  }
  std::string hist = "bin_left,bin_right,count\n";
  for (const auto& bin : ErrorHistogram(errors, cfg.histogram_bin_width)) {
    hist += FormatDouble(bin.left) + "," + FormatDouble(bin.right) + "," +
            std::to_string(bin.count) + "\n";
  }
  Write(cfg.output_dir / files::kScatterCsv, scatter, log);
  Write(cfg.output_dir / files::kSeriesCsv, series, log);
  Write(cfg.output_dir / files::kHistogramCsv, hist, log);
  EchoConfig(cfg, "plot-data", log);
}

}  // namespace epf::app
