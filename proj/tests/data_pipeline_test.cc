#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "epf/data_pipeline.h"
#include "epf/error.h"
#include "epf/feature_io.h"
#include "support/fixtures.h"

namespace epf {
namespace {

TimeTable Energy(const std::string& csv) {
  return EnergyTableFromCsv(ParseCsv(csv, "energy.csv"), "energy.csv");
}
TimeTable Weather(const std::string& csv) {
  return WeatherTableFromCsv(ParseCsv(csv, "weather.csv"), "weather.csv");
}

Timestamp Ts(const std::string& s) { return *ParseIso8601(s); }

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an epf::Error";
  return ErrorCode::kInvalidArgument;
}

TEST(LoadEnergy, ParsesThreeRows) {
  const TimeTable t = Energy(
      "time,total load actual,price actual\n"
      "2015-01-01T00:00Z,100,50\n"
      "2015-01-01T01:00Z,110,51\n"
      "2015-01-01T02:00Z,120,52\n");
  EXPECT_EQ(t.rows(), 3u);
  EXPECT_EQ(t.column_count(), 2u);
  EXPECT_EQ(t.column(0).provenance, "energy");
}

TEST(LoadEnergy, EmptyCellBecomesMissing) {
  const TimeTable t = Energy(
      "time,load\n2015-01-01T00:00Z,\n2015-01-01T01:00Z,7\n");
  EXPECT_EQ(t.rows(), 2u);
  EXPECT_TRUE(IsMissing(t.column(0).values[0]));
  EXPECT_EQ(t.column(0).values[1], 7.0);
}

TEST(LoadEnergy, DuplicateKeepsLastOccurrence) {
  // Oracle: scan rows in file order, overwrite per timestamp.
  const std::string csv =
      "time,load\n2015-01-01T00:00Z,100\n2015-01-01T01:00Z,5\n2015-01-01T00:00Z,120\n";
  std::map<std::string, double> oracle;
  oracle["2015-01-01T00:00Z"] = 100;
  oracle["2015-01-01T01:00Z"] = 5;
  oracle["2015-01-01T00:00Z"] = 120;
  const TimeTable t = Energy(csv);
  ASSERT_EQ(t.rows(), oracle.size());
  EXPECT_EQ(t.column(0).values[0], oracle["2015-01-01T00:00Z"]);
  EXPECT_EQ(t.column(0).values[1], oracle["2015-01-01T01:00Z"]);
}

TEST(LoadEnergy, SortsAndConvertsOffsets) {
  const TimeTable t = Energy(
      "time,load\n2015-01-01 02:00:00+01:00,2\n2015-01-01 00:00:00+01:00,1\n");
  EXPECT_EQ(t.timestamps()[0], Ts("2014-12-31T23:00Z"));
  EXPECT_EQ(t.column(0).values[0], 1.0);
}

TEST(LoadEnergy, Errors) {
  EXPECT_EQ(CodeOf([] { Energy(""); }), ErrorCode::kEmptyFile);
  EXPECT_EQ(CodeOf([] { Energy("load,price\n1,2\n"); }), ErrorCode::kMissingTimestampColumn);
  EXPECT_EQ(CodeOf([] { Energy("time,,x\n2015-01-01T00:00Z,1,2\n"); }),
            ErrorCode::kMalformedHeader);
  EXPECT_EQ(CodeOf([] { LoadEnergyCsv("/nonexistent/energy.csv"); }), ErrorCode::kIo);
}

TEST(LoadWeather, PivotsTwoCities) {
  const TimeTable t = Weather(
      "dt_iso,city_name,temp\n"
      "2015-01-01T00:00Z,Madrid,1\n2015-01-01T00:00Z,Valencia,2\n"
      "2015-01-01T01:00Z,Madrid,3\n2015-01-01T01:00Z,Valencia,4\n");
  ASSERT_EQ(t.rows(), 2u);
  ASSERT_EQ(t.column_count(), 2u);
  EXPECT_EQ(t.column(0).name, "Madrid_temp");
  EXPECT_EQ(t.column(1).name, "Valencia_temp");
  EXPECT_EQ(t.column(1).provenance, "weather:Valencia");
  EXPECT_EQ(t.column(1).values[1], 4.0);
}

TEST(LoadWeather, AbsentCityIsMissing) {
  const TimeTable t = Weather(
      "dt_iso,city_name,temp\n"
      "2015-01-01T00:00Z,Madrid,1\n2015-01-01T00:00Z,Valencia,2\n"
      "2015-01-01T01:00Z,Madrid,3\n");
  EXPECT_TRUE(IsMissing(t.column(1).values[1]));
}

TEST(LoadWeather, FiveCitiesFourVariablesGiveTwentyColumns) {
  const std::vector<std::string> cities = {"Valencia", "Madrid", "Bilbao", " Barcelona",
                                           "Seville"};
  std::string csv = "dt_iso,city_name,temp,humidity,rain_3h,wind_speed,weather_main\n";
  for (int h = 0; h < 3; ++h) {
    for (const auto& c : cities) {
      csv += "2015-01-01T0" + std::to_string(h) + ":00Z," + c + ",1,2,3,4,clear\n";
    }
  }
  const TimeTable t = Weather(csv);
  EXPECT_EQ(t.column_count(), cities.size() * 4);
  EXPECT_TRUE(t.FindColumn("Barcelona_rain_3h").has_value());
}

TEST(LoadWeather, Errors) {
  EXPECT_EQ(CodeOf([] { Weather("dt_iso,temp\n2015-01-01T00:00Z,1\n"); }),
            ErrorCode::kMissingCityColumn);
  EXPECT_EQ(CodeOf([] { Weather("city_name,temp\nMadrid,1\n"); }),
            ErrorCode::kMissingTimestampColumn);
}

TimeTable Hourly(Timestamp start, std::size_t n, const std::string& name,
                 const std::string& provenance, std::vector<double> values) {
  std::vector<Timestamp> ts;
  for (std::size_t i = 0; i < n; ++i) ts.push_back(start + 3600 * static_cast<Timestamp>(i));
  return TimeTable(ts, {Column{name, provenance, std::move(values)}});
}

TEST(Merge, InnerJoin) {
  const Timestamp t0 = Ts("2015-01-01T00:00Z");
  const TimeTable e = Hourly(t0, 3, "load", "energy", {1, 2, 3});
  const TimeTable w = Hourly(t0 + 3600, 3, "Madrid_temp", "weather:Madrid", {7, 8, 9});
  const TimeTable m = MergeOnTimestamp(e, w);
  ASSERT_EQ(m.rows(), 2u);
  EXPECT_EQ(m.timestamps()[0], t0 + 3600);
  EXPECT_EQ(m.column(0).values, (std::vector<double>{2, 3}));
  EXPECT_EQ(m.column(1).values, (std::vector<double>{7, 8}));
  EXPECT_EQ(m.column(1).provenance, "weather:Madrid");
}

TEST(Merge, IdenticalSetsPreserveRows) {
  const Timestamp t0 = Ts("2015-01-01T00:00Z");
  const TimeTable m = MergeOnTimestamp(Hourly(t0, 5, "a", "energy", {1, 2, 3, 4, 5}),
                                       Hourly(t0, 5, "b", "weather:X", {1, 2, 3, 4, 5}));
  EXPECT_EQ(m.rows(), 5u);
}

TEST(Merge, TwentyFourVersusTwentyOverlap) {
  // Oracle: set intersection of the two timestamp lists.
  const Timestamp t0 = Ts("2015-01-01T00:00Z");
  const TimeTable e = Hourly(t0, 24, "load", "energy", std::vector<double>(24, 1.0));
  TimeTable w = Hourly(t0 + 4 * 3600, 20, "X_temp", "weather:X", std::vector<double>(20, 2.0));
  w.AddColumn(Column{"X_wind", "weather:X", std::vector<double>(20, 3.0)});
  std::vector<Timestamp> inter;
  std::set_intersection(e.timestamps().begin(), e.timestamps().end(), w.timestamps().begin(),
                        w.timestamps().end(), std::back_inserter(inter));
  const TimeTable m = MergeOnTimestamp(e, w);
  EXPECT_EQ(m.rows(), inter.size());
  EXPECT_EQ(m.rows(), 20u);
  EXPECT_EQ(m.column_count(), e.column_count() + w.column_count());
  EXPECT_EQ(m.timestamps(), inter);
}

TEST(Merge, EmptyIntersection) {
  const Timestamp t0 = Ts("2015-01-01T00:00Z");
  EXPECT_EQ(CodeOf([&] {
              MergeOnTimestamp(Hourly(t0, 2, "a", "energy", {1, 2}),
                               Hourly(t0 + 10 * 3600, 2, "b", "weather:X", {1, 2}));
            }),
            ErrorCode::kEmptyIntersection);
}

double Derived(const TimeTable& t, const std::string& name, std::size_t row) {
  return t.column(*t.FindColumn(name)).values[row];
}

TEST(TimeFeatures, CalendarValues) {
  const std::vector<Timestamp> ts = {Ts("2015-01-01T00:00Z"), Ts("2015-06-15T13:00Z"),
                                     Ts("2018-12-31T23:00Z")};
  const TimeTable t = DeriveTimeFeatures(TimeTable(ts, {}));
  EXPECT_EQ(Derived(t, "hour", 0), 0);
  EXPECT_EQ(Derived(t, "day_of_month", 0), 1);
  EXPECT_EQ(Derived(t, "month", 0), 1);
  // Python: datetime.date(2015, 1, 1).weekday() == 3
  EXPECT_EQ(Derived(t, "day_of_week", 0), 3);
  EXPECT_EQ(Derived(t, "hour", 1), 13);
  EXPECT_EQ(Derived(t, "month", 1), 6);
  EXPECT_EQ(Derived(t, "hour", 2), 23);
  EXPECT_EQ(Derived(t, "month", 2), 12);
  // Python: datetime.date(2018, 12, 31).weekday() == 0
  EXPECT_EQ(Derived(t, "day_of_week", 2), 0);
  EXPECT_EQ(t.column(0).provenance, "derived");
}

TEST(TimeFeatures, ZellerCrossCheckOverFourYears) {
  // Zeller's congruence as an independent weekday oracle.
  auto zeller = [](int y, int m, int d) {
    if (m < 3) { m += 12; y -= 1; }
    const int k = y % 100, j = y / 100;
    const int h = (d + 13 * (m + 1) / 5 + k + k / 4 + j / 4 + 5 * j) % 7;  // 0 = Saturday
    return (h + 5) % 7;  // 0 = Monday
  };
  std::vector<Timestamp> ts;
  for (Timestamp t = Ts("2015-01-01T12:00Z"); t < Ts("2019-01-01T00:00Z"); t += 86400 * 7 + 3600) {
    ts.push_back(t);
  }
  const TimeTable t = DeriveTimeFeatures(TimeTable(ts, {}));
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const CivilTime c = ToCivil(ts[i]);
    EXPECT_EQ(Derived(t, "day_of_week", i), zeller(c.year, c.month, c.day));
  }
}

TEST(Impute, WeatherMidpoint) {
  const TimeTable t = Hourly(Ts("2015-01-01T00:00Z"), 3, "X_temp", "weather:X",
                             {10, kMissing, 20});
  const ImputeResult r = ImputeMissing(t);
  EXPECT_EQ(r.table.column(0).values, (std::vector<double>{10, 15, 20}));
  EXPECT_EQ(r.imputed_counts[0], 1u);
}

TEST(Impute, EnergyLeadingMeanThenForwardFill) {
  const TimeTable t = Hourly(Ts("2015-01-01T00:00Z"), 4, "load", "energy",
                             {kMissing, 5, kMissing, kMissing});
  const ImputeResult r = ImputeMissing(t);
  EXPECT_EQ(r.table.column(0).values, (std::vector<double>{5, 5, 5, 5}));
  EXPECT_EQ(r.imputed_counts[0], 3u);
}

TEST(Impute, LongWeatherGapIsForwardFilled) {
  std::vector<double> v = {1};
  for (int i = 0; i < 7; ++i) v.push_back(kMissing);
  v.push_back(9);
  const ImputeResult r =
      ImputeMissing(Hourly(Ts("2015-01-01T00:00Z"), v.size(), "X_t", "weather:X", v));
  for (std::size_t i = 1; i < 8; ++i) EXPECT_EQ(r.table.column(0).values[i], 1.0);
  // A six-hour gap is still interpolated.
  std::vector<double> w = {0, kMissing, kMissing, kMissing, kMissing, kMissing, kMissing, 7};
  const ImputeResult r2 =
      ImputeMissing(Hourly(Ts("2015-01-01T00:00Z"), w.size(), "X_t", "weather:X", w));
  for (std::size_t i = 0; i < w.size(); ++i) EXPECT_DOUBLE_EQ(r2.table.column(0).values[i], i);
}

TEST(Impute, AllMissingColumnAndGridErrors) {
  const Timestamp t0 = Ts("2015-01-01T00:00Z");
  EXPECT_EQ(CodeOf([&] { ImputeMissing(Hourly(t0, 2, "x", "energy", {kMissing, kMissing})); }),
            ErrorCode::kAllMissingColumn);
  EXPECT_EQ(CodeOf([&] {
              ImputeMissing(TimeTable({t0, t0 + 7200}, {Column{"x", "energy", {1, kMissing}}}));
            }),
            ErrorCode::kNotHourlyGrid);
}

TEST(Impute, GridCompletionThenNoMissing) {
  const Timestamp t0 = Ts("2015-01-01T00:00Z");
  const TimeTable sparse(
      {t0, t0 + 3600, t0 + 4 * 3600},
      {Column{"x", "energy", {1, kMissing, 4}}, Column{"X_t", "weather:X", {0, 1, 4}}});
  const TimeTable grid = CompleteHourlyGrid(sparse);
  EXPECT_EQ(grid.rows(), 5u);
  EXPECT_TRUE(grid.IsHourlyGrid());
  const ImputeResult r = ImputeMissing(grid);
  EXPECT_EQ(r.table.CountMissing(), 0u);
  EXPECT_EQ(r.table.column(1).values, (std::vector<double>{0, 1, 2, 3, 4}));
}

double PearsonOracle(const std::vector<double>& a, const std::vector<double>& b) {
  long double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) { ma += a[i]; mb += b[i]; }
  ma /= a.size();
  mb /= b.size();
  long double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return static_cast<double>(sab / std::sqrt(saa * sbb));
}

TimeTable SelectionFixture(std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  const std::size_t n = 200;
  std::vector<double> y(n), linear(n), noise(n), partial(n), constant(n, 3.0);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = nd(gen);
    linear[i] = 2 * y[i] + 3;
    noise[i] = nd(gen);
    partial[i] = y[i] + nd(gen);
  }
  std::vector<Timestamp> ts;
  for (std::size_t i = 0; i < n; ++i) ts.push_back(3600 * static_cast<Timestamp>(i + 400000));
  return TimeTable(ts, {Column{"noise", "energy", noise}, Column{"price", "energy", y},
                        Column{"partial", "energy", partial},
                        Column{"constant", "energy", constant},
                        Column{"linear", "energy", linear}});
}

TEST(SelectFeatures, RanksByAbsolutePearson) {
  const TimeTable t = SelectionFixture(5);
  const FeatureSpec spec = SelectFeatures(t, "price", 3);
  ASSERT_EQ(spec.selected.size(), 3u);
  EXPECT_EQ(spec.selected[0], "linear");
  EXPECT_NEAR(spec.correlations[0].pearson_r, 1.0, 1e-12);
  EXPECT_EQ(spec.selected[1], "partial");
  EXPECT_EQ(spec.selected[2], "noise");
  for (const auto& c : spec.correlations) {
    const auto& col = t.column(*t.FindColumn(c.name)).values;
    EXPECT_NEAR(c.pearson_r, PearsonOracle(col, t.column(1).values), 1e-12);
  }
  EXPECT_EQ(std::count(spec.selected.begin(), spec.selected.end(), "price"), 0);
  EXPECT_EQ(std::count(spec.selected.begin(), spec.selected.end(), "constant"), 0);
}

TEST(SelectFeatures, SelfCorrelationRanksFirst) {
  TimeTable t = SelectionFixture(6);
  t.AddColumn(Column{"copy", "energy", t.column(1).values});
  const FeatureSpec spec = SelectFeatures(t, "price", 1);
  EXPECT_EQ(spec.selected[0], "copy");
  EXPECT_DOUBLE_EQ(spec.correlations[0].pearson_r, 1.0);
}

TEST(SelectFeatures, PermutationInvariantAndTieBreak) {
  const TimeTable t = SelectionFixture(7);
  std::vector<Column> cols = t.columns();
  cols.push_back(Column{"a_twin", "energy", cols[4].values});  // ties with "linear"
  std::vector<Column> reversed(cols.rbegin(), cols.rend());
  const FeatureSpec a = SelectFeatures(TimeTable(t.timestamps(), cols), "price", 4);
  const FeatureSpec b = SelectFeatures(TimeTable(t.timestamps(), reversed), "price", 4);
  EXPECT_EQ(a.selected, b.selected);
  EXPECT_EQ(a.selected[0], "a_twin");
  EXPECT_EQ(a.selected[1], "linear");
}

TEST(SelectFeatures, Errors) {
  const TimeTable t = SelectionFixture(8);
  EXPECT_EQ(CodeOf([&] { SelectFeatures(t, "nope", 1); }), ErrorCode::kTargetMissing);
  EXPECT_EQ(CodeOf([&] { SelectFeatures(t, "price", 4); }), ErrorCode::kKTooLarge);
}

FeatureMatrix SmallMatrix(std::vector<std::vector<double>> cols) {
  FeatureMatrix m;
  const auto n = static_cast<Eigen::Index>(cols[0].size());
  m.x.resize(n, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (Eigen::Index i = 0; i < n; ++i) m.x(i, static_cast<Eigen::Index>(j)) = cols[j][static_cast<std::size_t>(i)];
    m.feature_names.push_back("f" + std::to_string(j));
  }
  m.y = Vector::LinSpaced(n, 0, static_cast<double>(n - 1));
  for (Eigen::Index i = 0; i < n; ++i) m.timestamps.push_back(3600 * (i + 1000));
  m.target_name = "y";
  return m;
}

FeatureSpec SpecOf(const FeatureMatrix& m) {
  FeatureSpec s;
  s.selected = m.feature_names;
  s.target_name = m.target_name;
  return s;
}

TEST(Standardize, PopulationStd) {
  const FeatureMatrix m = SmallMatrix({{1, 2, 3}});
  const ScalerParams p = StandardizeFit(m, SpecOf(m));
  EXPECT_DOUBLE_EQ(p.means[0], 2.0);
  EXPECT_NEAR(p.stds[0], std::sqrt(2.0 / 3.0), 1e-15);
}

TEST(Standardize, ApplyInvertAndIdempotence) {
  const FeatureMatrix m = SmallMatrix({{1, 5, 2, 8, 3}, {-4, 0, 10, 2, 2}});
  const ScalerParams p = StandardizeFit(m, SpecOf(m));
  const FeatureMatrix s = StandardizeApply(p, m);
  for (Eigen::Index j = 0; j < 2; ++j) {
    EXPECT_LT(std::abs(s.x.col(j).mean()), 1e-10);
    const double sd = std::sqrt((s.x.col(j).array() - s.x.col(j).mean()).square().mean());
    EXPECT_LT(std::abs(sd - 1.0), 1e-9);
  }
  EXPECT_EQ(s.y, m.y);  // target untouched
  const ScalerParams again = StandardizeFit(s, SpecOf(s));
  EXPECT_NEAR(again.means[0], 0.0, 1e-12);
  EXPECT_NEAR(again.stds[1], 1.0, 1e-12);
  const FeatureMatrix back = StandardizeInvert(p, s);
  EXPECT_LT((back.x - m.x).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Standardize, FormulaAndErrors) {
  ScalerParams p{{2.0}, {0.5}};
  FeatureMatrix m = SmallMatrix({{3.0, 1.0}});
  EXPECT_DOUBLE_EQ(StandardizeApply(p, m).x(0, 0), 2.0);
  const FeatureMatrix c = SmallMatrix({{5, 5, 5}});
  EXPECT_EQ(CodeOf([&] { StandardizeFit(c, SpecOf(c)); }), ErrorCode::kConstantColumn);
  const FeatureMatrix two = SmallMatrix({{1, 2}, {3, 4}});
  EXPECT_EQ(CodeOf([&] { StandardizeApply(p, two); }), ErrorCode::kDimensionMismatch);
}

TEST(Split, FloorArithmetic) {
  std::vector<double> col(10);
  std::iota(col.begin(), col.end(), 0.0);
  const FeatureMatrix m = SmallMatrix({col});
  auto s = ChronologicalSplit(m, 0.8);
  EXPECT_EQ(s.train.rows(), 8u);
  EXPECT_EQ(s.test.rows(), 2u);
  EXPECT_LT(s.train.timestamps.back(), s.test.timestamps.front());
  s = ChronologicalSplit(m, 0.99);
  EXPECT_EQ(s.train.rows(), 9u);
  EXPECT_EQ(s.test.rows(), 1u);
  EXPECT_EQ(CodeOf([&] { ChronologicalSplit(m, 0.05); }), ErrorCode::kDegenerateSplit);
  EXPECT_EQ(CodeOf([&] { ChronologicalSplit(m, 1.0); }), ErrorCode::kInvalidArgument);
}

TEST(Split, RandomModeIsSeeded) {
  std::vector<double> col(50);
  std::iota(col.begin(), col.end(), 0.0);
  const FeatureMatrix m = SmallMatrix({col});
  const auto a = RandomSplit(m, 0.8, 3);
  const auto b = RandomSplit(m, 0.8, 3);
  EXPECT_EQ(a.train.x, b.train.x);
  EXPECT_EQ(a.train.rows(), 40u);
  EXPECT_TRUE(std::is_sorted(a.test.timestamps.begin(), a.test.timestamps.end()));
}

class FixturePipeline : public ::testing::Test {
 protected:
  static PipelineResult Run() {
    PipelineConfig cfg;
    cfg.source_utc_offset_minutes = 60;
    const auto dir = testing::SourceDir() / "data" / "fixture";
    LoadOptions load;
    load.source_utc_offset_minutes = 60;
    return RunPipeline(LoadEnergyCsv(dir / "energy.csv", load),
                       LoadWeatherCsv(dir / "weather.csv", load), cfg);
  }
};

TEST_F(FixturePipeline, EndToEnd) {
  const PipelineResult r = Run();
  EXPECT_EQ(r.summary.grid_rows, 500u);
  EXPECT_EQ(r.train.rows() + r.test.rows(), r.summary.grid_rows);
  EXPECT_EQ(r.train.rows(), 400u);
  EXPECT_EQ(r.test.rows(), 100u);
  EXPECT_EQ(r.spec.selected.size(), 27u);
  EXPECT_TRUE(r.train.x.allFinite());
  EXPECT_TRUE(r.test.x.allFinite());
  EXPECT_LT(r.train.timestamps.back(), r.test.timestamps.front());
  for (Eigen::Index j = 0; j < r.train.x.cols(); ++j) {
    const auto col = r.train.x.col(j).array();
    EXPECT_LT(std::abs(col.mean()), 1e-9);
    EXPECT_LT(std::abs(std::sqrt((col - col.mean()).square().mean()) - 1.0), 1e-9);
  }
  // Target stays in price units.
  EXPECT_GT(r.train.y.mean(), 20.0);
  EXPECT_EQ(std::count(r.spec.selected.begin(), r.spec.selected.end(), "price day ahead"), 0);
}

TEST_F(FixturePipeline, DeterministicSerialization) {
  const PipelineResult a = Run();
  const PipelineResult b = Run();
  EXPECT_EQ(SerializeFeatureMatrix(a.train), SerializeFeatureMatrix(b.train));
  EXPECT_EQ(SerializeFeatureMatrix(a.test), SerializeFeatureMatrix(b.test));
  const FeatureMatrix parsed = ParseFeatureMatrix(SerializeFeatureMatrix(a.test));
  EXPECT_EQ(parsed.x, a.test.x);
  EXPECT_EQ(parsed.timestamps, a.test.timestamps);
  EXPECT_EQ(SerializeFeatureMatrix(parsed), SerializeFeatureMatrix(a.test));
}

}  // namespace
}  // namespace epf
