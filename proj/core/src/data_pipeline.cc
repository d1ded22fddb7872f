#include "epf/data_pipeline.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>

#include "epf/error.h"
#include "epf/random.h"

namespace epf {

namespace {

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string TrimCopy(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return std::string(s);
}

std::optional<std::size_t> FindHeader(const CsvDocument& doc,
                                      const std::optional<std::string>& forced,
                                      std::initializer_list<std::string_view> candidates) {
  if (forced) {
    for (std::size_t i = 0; i < doc.header.size(); ++i) {
      if (doc.header[i] == *forced) return i;
    }
    return std::nullopt;
  }
  for (std::string_view want : candidates) {
    for (std::size_t i = 0; i < doc.header.size(); ++i) {
      if (Lower(doc.header[i]) == want) return i;
    }
  }
  return std::nullopt;
}

std::size_t RequireTimestampColumn(const CsvDocument& doc,
                                   std::string_view source,
                                   const LoadOptions& options) {
  const auto col = FindHeader(
      doc, options.timestamp_column,
      {"time", "timestamp", "datetime", "date_time", "dt_iso", "date"});
  if (!col) {
    throw Error(ErrorCode::kMissingTimestampColumn,
                std::string(source) + ": no timestamp column found");
  }
  return *col;
}

Timestamp ParseRowTimestamp(const CsvDocument& doc, std::size_t row,
                            std::size_t col, std::string_view source,
                            const LoadOptions& options) {
  const std::string& cell = doc.rows[row][col];
  const auto ts = ParseIso8601(cell, options.source_utc_offset_minutes);
  if (!ts) {
    throw Error(ErrorCode::kMalformedTimestamp,
                std::string(source) + ":" +
                    std::to_string(doc.line_numbers[row]) +
                    ": unparseable timestamp '" + cell + "'");
  }
  if (*ts % kSecondsPerHour != 0) {
    throw Error(ErrorCode::kMalformedTimestamp,
                std::string(source) + ":" +
                    std::to_string(doc.line_numbers[row]) +
                    ": timestamp not on an hour boundary '" + cell + "'");
  }
  return *ts;
}

// Column indices (excluding `skip`) with at least one numeric cell.
std::vector<std::size_t> NumericColumns(const CsvDocument& doc,
                                        std::initializer_list<std::size_t> skip) {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < doc.header.size(); ++c) {
    if (std::find(skip.begin(), skip.end(), c) != skip.end()) continue;
    for (const auto& row : doc.rows) {
      if (ParseNumber(row[c])) {
        out.push_back(c);
        break;
      }
    }
  }
  return out;
}

double CellValue(const std::string& cell) {
  const auto v = ParseNumber(cell);
  return v ? *v : kMissing;
}

struct MeanStd {
  double mean;
  double std;
};

// Two-pass population statistics.
MeanStd ColumnStats(const Eigen::Ref<const Vector>& v) {
  const double n = static_cast<double>(v.size());
  const double mean = v.sum() / n;
  const double ss = (v.array() - mean).square().sum();
  return {mean, std::sqrt(ss / n)};
}

}  // namespace

TimeTable EnergyTableFromCsv(const CsvDocument& doc, std::string_view source,
                             const LoadOptions& options) {
  if (doc.rows.empty()) {
    throw Error(ErrorCode::kEmptyFile,
                std::string(source) + ": no data rows");
  }
  const std::size_t ts_col = RequireTimestampColumn(doc, source, options);
  const std::vector<std::size_t> value_cols = NumericColumns(doc, {ts_col});
  if (value_cols.empty()) {
    throw Error(ErrorCode::kMalformedHeader,
                std::string(source) + ": no numeric columns");
  }

  std::vector<Timestamp> raw_ts(doc.rows.size());
  for (std::size_t r = 0; r < doc.rows.size(); ++r) {
    raw_ts[r] = ParseRowTimestamp(doc, r, ts_col, source, options);
  }
  // Stable order by time; within equal timestamps file order is preserved, so
  // the last element of each run is the last occurrence.
  std::vector<std::size_t> order(doc.rows.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return raw_ts[a] < raw_ts[b];
  });
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i + 1 < order.size() && raw_ts[order[i + 1]] == raw_ts[order[i]]) continue;
    kept.push_back(order[i]);
  }

  std::vector<Timestamp> timestamps;
  timestamps.reserve(kept.size());
  for (std::size_t r : kept) timestamps.push_back(raw_ts[r]);

  std::vector<Column> columns;
  for (std::size_t c : value_cols) {
    Column col{doc.header[c], "energy", {}};
    col.values.reserve(kept.size());
    for (std::size_t r : kept) col.values.push_back(CellValue(doc.rows[r][c]));
    columns.push_back(std::move(col));
  }
  return TimeTable(std::move(timestamps), std::move(columns));
}

TimeTable LoadEnergyCsv(const std::filesystem::path& path,
                        const LoadOptions& options) {
  return EnergyTableFromCsv(ReadCsv(path), path.string(), options);
}

TimeTable WeatherTableFromCsv(const CsvDocument& doc, std::string_view source,
                              const LoadOptions& options) {
  if (doc.rows.empty()) {
    throw Error(ErrorCode::kEmptyFile, std::string(source) + ": no data rows");
  }
  const std::size_t ts_col = RequireTimestampColumn(doc, source, options);
  const auto city_col =
      FindHeader(doc, options.city_column, {"city_name", "city"});
  if (!city_col) {
    throw Error(ErrorCode::kMissingCityColumn,
                std::string(source) + ": no city column found");
  }
  const std::vector<std::size_t> vars = NumericColumns(doc, {ts_col, *city_col});
  if (vars.empty()) {
    throw Error(ErrorCode::kMalformedHeader,
                std::string(source) + ": no numeric weather columns");
  }

  // city -> timestamp -> row index (last wins)
  std::map<std::string, std::map<Timestamp, std::size_t>> cells;
  std::vector<Timestamp> all_ts;
  for (std::size_t r = 0; r < doc.rows.size(); ++r) {
    const Timestamp ts = ParseRowTimestamp(doc, r, ts_col, source, options);
    std::string city = TrimCopy(doc.rows[r][*city_col]);
    if (city.empty()) {
      throw Error(ErrorCode::kMalformedRow,
                  std::string(source) + ":" +
                      std::to_string(doc.line_numbers[r]) + ": empty city name");
    }
    cells[std::move(city)][ts] = r;
    all_ts.push_back(ts);
  }
  std::sort(all_ts.begin(), all_ts.end());
  all_ts.erase(std::unique(all_ts.begin(), all_ts.end()), all_ts.end());

  std::vector<Column> columns;
  for (const auto& [city, by_ts] : cells) {
    for (std::size_t v : vars) {
      Column col{city + "_" + doc.header[v], "weather:" + city, {}};
      col.values.reserve(all_ts.size());
      for (Timestamp ts : all_ts) {
        const auto it = by_ts.find(ts);
        col.values.push_back(it == by_ts.end() ? kMissing
                                               : CellValue(doc.rows[it->second][v]));
      }
      columns.push_back(std::move(col));
    }
  }
  return TimeTable(std::move(all_ts), std::move(columns));
}

TimeTable LoadWeatherCsv(const std::filesystem::path& path,
                         const LoadOptions& options) {
  return WeatherTableFromCsv(ReadCsv(path), path.string(), options);
}

TimeTable MergeOnTimestamp(const TimeTable& energy, const TimeTable& weather) {
  const auto& a = energy.timestamps();
  const auto& b = weather.timestamps();
  std::vector<std::size_t> ia, ib;
  for (std::size_t i = 0, j = 0; i < a.size() && j < b.size();) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ia.push_back(i++);
      ib.push_back(j++);
    }
  }
  if (ia.empty()) {
    throw Error(ErrorCode::kEmptyIntersection,
                "energy and weather tables share no timestamps");
  }

  std::vector<Timestamp> ts;
  ts.reserve(ia.size());
  for (std::size_t i : ia) ts.push_back(a[i]);

  TimeTable out(std::move(ts), {});
  auto take = [](const Column& src, const std::vector<std::size_t>& idx) {
    Column c{src.name, src.provenance, {}};
    c.values.reserve(idx.size());
    for (std::size_t i : idx) c.values.push_back(src.values[i]);
    return c;
  };
  for (const auto& c : energy.columns()) out.AddColumn(take(c, ia));
  for (const auto& c : weather.columns()) out.AddColumn(take(c, ib));
  return out;
}

TimeTable CompleteHourlyGrid(const TimeTable& table) {
  if (table.rows() == 0) return table;
  const auto& src_ts = table.timestamps();
  const Timestamp first = src_ts.front();
  const std::size_t n =
      static_cast<std::size_t>((src_ts.back() - first) / kSecondsPerHour) + 1;
  std::vector<Timestamp> ts(n);
  for (std::size_t i = 0; i < n; ++i) {
    ts[i] = first + static_cast<Timestamp>(i) * kSecondsPerHour;
  }
  std::vector<std::size_t> slot(src_ts.size());
  for (std::size_t i = 0; i < src_ts.size(); ++i) {
    slot[i] = static_cast<std::size_t>((src_ts[i] - first) / kSecondsPerHour);
  }
  TimeTable out(std::move(ts), {});
  for (const auto& c : table.columns()) {
    Column col{c.name, c.provenance, std::vector<double>(n, kMissing)};
    for (std::size_t i = 0; i < slot.size(); ++i) col.values[slot[i]] = c.values[i];
    out.AddColumn(std::move(col));
  }
  return out;
}

TimeTable DeriveTimeFeatures(const TimeTable& table) {
  TimeTable out = table;
  const std::size_t n = table.rows();
  Column hour{"hour", "derived", std::vector<double>(n)};
  Column dow{"day_of_week", "derived", std::vector<double>(n)};
  Column month{"month", "derived", std::vector<double>(n)};
  Column dom{"day_of_month", "derived", std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const CivilTime c = ToCivil(table.timestamps()[i]);
    hour.values[i] = c.hour;
    dow.values[i] = c.day_of_week;
    month.values[i] = c.month;
    dom.values[i] = c.day;
  }
  out.AddColumn(std::move(hour));
  out.AddColumn(std::move(dow));
  out.AddColumn(std::move(month));
  out.AddColumn(std::move(dom));
  return out;
}

ImputeResult ImputeMissing(const TimeTable& table,
                           const ImputationPolicy& policy) {
  if (!table.IsHourlyGrid()) {
    throw Error(ErrorCode::kNotHourlyGrid,
                "imputation requires a complete hourly grid");
  }
  if (policy.max_interp_gap < 0) {
    throw Error(ErrorCode::kInvalidArgument, "max_interp_gap must be >= 0");
  }
  const std::size_t n = table.rows();
  std::vector<Column> columns;
  std::vector<std::size_t> counts;
  for (const auto& src : table.columns()) {
    Column col = src;
    std::vector<double>& v = col.values;
    double sum = 0.0;
    std::size_t observed = 0;
    for (double x : v) {
      if (!IsMissing(x)) {
        sum += x;
        ++observed;
      }
    }
    if (observed == 0) {
      throw Error(ErrorCode::kAllMissingColumn,
                  "column '" + src.name + "' has no observed values");
    }
    const double mean = sum / static_cast<double>(observed);
    const bool is_weather = src.provenance.starts_with("weather");

    std::size_t filled = 0;
    std::size_t i = 0;
    while (i < n) {
      if (!IsMissing(v[i])) {
        ++i;
        continue;
      }
      std::size_t end = i;
      while (end < n && IsMissing(v[end])) ++end;
      const std::size_t gap = end - i;
      if (i == 0) {
        for (std::size_t k = i; k < end; ++k) v[k] = mean;
      } else if (is_weather && end < n &&
                 gap <= static_cast<std::size_t>(policy.max_interp_gap)) {
        const double left = v[i - 1];
        const double right = v[end];
        const double span = static_cast<double>(gap + 1);
        for (std::size_t k = i; k < end; ++k) {
          const double t = static_cast<double>(k - (i - 1)) / span;
          v[k] = left + (right - left) * t;
        }
      } else {
        for (std::size_t k = i; k < end; ++k) v[k] = v[i - 1];
      }
      filled += gap;
      i = end;
    }
    counts.push_back(filled);
    columns.push_back(std::move(col));
  }
  return ImputeResult{TimeTable(table.timestamps(), std::move(columns)),
                      std::move(counts)};
}

double PearsonCorrelation(const std::vector<double>& a,
                          const std::vector<double>& b) {
  if (a.size() != b.size() || a.empty()) {
    throw Error(ErrorCode::kLengthMismatch, "pearson: length mismatch");
  }
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

FeatureSpec SelectFeatures(const TimeTable& table, std::string_view target_name,
                           std::size_t k,
                           const std::vector<std::string>& exclude) {
  const auto target_idx = table.FindColumn(target_name);
  if (!target_idx) {
    throw Error(ErrorCode::kTargetMissing,
                "target column '" + std::string(target_name) + "' not found");
  }
  if (k == 0) {
    throw Error(ErrorCode::kInvalidArgument, "feature count must be >= 1");
  }
  const auto& target = table.column(*target_idx).values;
  auto is_constant = [](const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *lo == *hi;
  };
  for (double x : target) {
    if (IsMissing(x)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "feature selection requires an imputed table");
    }
  }
  if (is_constant(target)) {
    throw Error(ErrorCode::kDegenerateTarget, "target column is constant");
  }

  FeatureSpec spec;
  spec.target_name = std::string(target_name);
  for (std::size_t c = 0; c < table.column_count(); ++c) {
    const Column& col = table.column(c);
    if (c == *target_idx) continue;
    if (std::find(exclude.begin(), exclude.end(), col.name) != exclude.end()) continue;
    for (double x : col.values) {
      if (IsMissing(x)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "feature selection requires an imputed table (column '" +
                        col.name + "')");
      }
    }
    if (is_constant(col.values)) continue;
    spec.correlations.push_back({col.name, PearsonCorrelation(col.values, target)});
  }
  std::sort(spec.correlations.begin(), spec.correlations.end(),
            [](const ColumnCorrelation& a, const ColumnCorrelation& b) {
              const double ra = std::abs(a.pearson_r);
              const double rb = std::abs(b.pearson_r);
              if (ra != rb) return ra > rb;
              return a.name < b.name;
            });
  if (k > spec.correlations.size()) {
    throw Error(ErrorCode::kKTooLarge,
                "requested " + std::to_string(k) + " features but only " +
                    std::to_string(spec.correlations.size()) +
                    " non-constant candidates exist");
  }
  for (std::size_t i = 0; i < k; ++i) {
    spec.selected.push_back(spec.correlations[i].name);
  }
  return spec;
}

FeatureMatrix BuildFeatureMatrix(const TimeTable& table,
                                 const FeatureSpec& spec) {
  const auto target_idx = table.FindColumn(spec.target_name);
  if (!target_idx) {
    throw Error(ErrorCode::kTargetMissing,
                "target column '" + spec.target_name + "' not found");
  }
  const Eigen::Index n = static_cast<Eigen::Index>(table.rows());
  const Eigen::Index d = static_cast<Eigen::Index>(spec.selected.size());
  FeatureMatrix m;
  m.x.resize(n, d);
  m.y.resize(n);
  m.feature_names = spec.selected;
  m.timestamps = table.timestamps();
  m.target_name = spec.target_name;
  for (Eigen::Index j = 0; j < d; ++j) {
    const auto idx = table.FindColumn(spec.selected[static_cast<std::size_t>(j)]);
    if (!idx) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "selected column '" + spec.selected[static_cast<std::size_t>(j)] +
                      "' not in table");
    }
    const auto& v = table.column(*idx).values;
    for (Eigen::Index i = 0; i < n; ++i) m.x(i, j) = v[static_cast<std::size_t>(i)];
  }
  const auto& y = table.column(*target_idx).values;
  for (Eigen::Index i = 0; i < n; ++i) m.y(i) = y[static_cast<std::size_t>(i)];
  if (!m.x.allFinite() || !m.y.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument,
                "feature matrix contains missing or non-finite cells");
  }
  return m;
}

FeatureMatrix TakeRows(const FeatureMatrix& m,
                       const std::vector<std::size_t>& rows) {
  FeatureMatrix out;
  out.x = TakeRows(m.x, rows);
  out.y = TakeRows(m.y, rows);
  out.feature_names = m.feature_names;
  out.target_name = m.target_name;
  out.scaler = m.scaler;
  out.timestamps.reserve(rows.size());
  for (std::size_t r : rows) out.timestamps.push_back(m.timestamps.at(r));
  return out;
}

ScalerParams StandardizeFit(const FeatureMatrix& train,
                            const FeatureSpec& spec) {
  if (train.rows() == 0) {
    throw Error(ErrorCode::kEmptyTrainingSet, "cannot fit scaler on zero rows");
  }
  if (train.cols() != spec.selected.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "matrix has " + std::to_string(train.cols()) +
                    " columns, feature spec has " +
                    std::to_string(spec.selected.size()));
  }
  ScalerParams params;
  for (Eigen::Index j = 0; j < train.x.cols(); ++j) {
    const Vector col = train.x.col(j);
    if (col.maxCoeff() == col.minCoeff()) {
      throw Error(ErrorCode::kConstantColumn,
                  "feature '" + train.feature_names[static_cast<std::size_t>(j)] +
                      "' is constant on the training rows");
    }
    const MeanStd s = ColumnStats(col);
    params.means.push_back(s.mean);
    params.stds.push_back(s.std);
  }
  return params;
}

FeatureMatrix StandardizeApply(const ScalerParams& params,
                               const FeatureMatrix& m) {
  if (params.means.size() != m.cols() || params.stds.size() != m.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "scaler has " + std::to_string(params.means.size()) +
                    " features, matrix has " + std::to_string(m.cols()));
  }
  FeatureMatrix out = m;
  for (Eigen::Index j = 0; j < out.x.cols(); ++j) {
    const auto k = static_cast<std::size_t>(j);
    out.x.col(j) = (out.x.col(j).array() - params.means[k]) / params.stds[k];
  }
  out.scaler = params;
  return out;
}

FeatureMatrix StandardizeInvert(const ScalerParams& params,
                                const FeatureMatrix& m) {
  if (params.means.size() != m.cols() || params.stds.size() != m.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "scaler/matrix width mismatch");
  }
  FeatureMatrix out = m;
  for (Eigen::Index j = 0; j < out.x.cols(); ++j) {
    const auto k = static_cast<std::size_t>(j);
    out.x.col(j) = out.x.col(j).array() * params.stds[k] + params.means[k];
  }
  out.scaler.reset();
  return out;
}

namespace {

std::size_t TrainCount(std::size_t n, double train_fraction) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "train_fraction must lie strictly between 0 and 1");
  }
  const auto n_train =
      static_cast<std::size_t>(std::floor(static_cast<double>(n) * train_fraction));
  if (n_train == 0 || n_train == n) {
    throw Error(ErrorCode::kDegenerateSplit,
                "split of " + std::to_string(n) + " rows at fraction " +
                    std::to_string(train_fraction) + " leaves a side empty");
  }
  return n_train;
}

}  // namespace

TrainTestSplit ChronologicalSplit(const FeatureMatrix& m,
                                  double train_fraction) {
  const std::size_t n_train = TrainCount(m.rows(), train_fraction);
  std::vector<std::size_t> train(n_train), test(m.rows() - n_train);
  std::iota(train.begin(), train.end(), 0);
  std::iota(test.begin(), test.end(), n_train);
  return {TakeRows(m, train), TakeRows(m, test)};
}

TrainTestSplit RandomSplit(const FeatureMatrix& m, double train_fraction,
                           std::uint64_t seed) {
  const std::size_t n_train = TrainCount(m.rows(), train_fraction);
  Rng rng(seed);
  std::vector<std::size_t> train = rng.SampleWithoutReplacement(m.rows(), n_train);
  std::vector<std::size_t> test;
  test.reserve(m.rows() - n_train);
  for (std::size_t i = 0, t = 0; i < m.rows(); ++i) {
    if (t < train.size() && train[t] == i) {
      ++t;
    } else {
      test.push_back(i);
    }
  }
  return {TakeRows(m, train), TakeRows(m, test)};
}

PipelineResult RunPipeline(const TimeTable& energy, const TimeTable& weather,
                           const PipelineConfig& config) {
  PipelineResult result;
  result.summary.energy_rows = energy.rows();
  result.summary.weather_rows = weather.rows();

  const TimeTable merged = MergeOnTimestamp(energy, weather);
  result.summary.merged_rows = merged.rows();
  const TimeTable grid = CompleteHourlyGrid(merged);
  result.summary.grid_rows = grid.rows();
  result.summary.inserted_rows = grid.rows() - merged.rows();

  const TimeTable with_time = DeriveTimeFeatures(grid);
  ImputeResult imputed =
      ImputeMissing(with_time, ImputationPolicy{config.max_interp_gap});
  for (std::size_t c = 0; c < imputed.table.column_count(); ++c) {
    if (imputed.imputed_counts[c] == 0) continue;
    result.summary.imputed_columns.push_back(imputed.table.column(c).name);
    result.summary.imputed_counts.push_back(imputed.imputed_counts[c]);
  }

  result.spec = SelectFeatures(imputed.table, config.target_column,
                               config.feature_count, config.exclude_columns);
  const FeatureMatrix raw = BuildFeatureMatrix(imputed.table, result.spec);
  const TrainTestSplit split =
      config.split_mode == SplitMode::kChronological
          ? ChronologicalSplit(raw, config.train_fraction)
          : RandomSplit(raw, config.train_fraction, config.seed);
  result.scaler = StandardizeFit(split.train, result.spec);
  result.train = StandardizeApply(result.scaler, split.train);
  result.test = StandardizeApply(result.scaler, split.test);
  return result;
}

}  // namespace epf
