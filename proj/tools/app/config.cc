#include "config.h"

#include "epf/csv.h"
#include "epf/error.h"
#include "epf/model_io.h"
#include "json.hpp"

namespace epf::app {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void Invalid(const std::string& what) {
  throw Error(ErrorCode::kInvalidConfig, what);
}

// Rejects keys outside `allowed`.
void CheckKeys(const json& obj, std::string_view where,
               std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) Invalid(std::string(where) + " must be an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (auto key : allowed) known = known || item.key() == key;
    if (!known) Invalid("unknown key '" + std::string(where) + "." + item.key() + "'");
  }
}

template <class T>
void Read(const json& obj, const char* key, std::string_view where, T& out) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  const std::string name = std::string(where) + "." + key;
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) Invalid(name + " must be a boolean");
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) Invalid(name + " must be an integer");
    if constexpr (std::is_unsigned_v<T>) {
      if (v.get<std::int64_t>() < 0 && !v.is_number_unsigned()) Invalid(name + " must be >= 0");
    }
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) Invalid(name + " must be a number");
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) Invalid(name + " must be a string");
  }
  out = v.get<T>();
}

std::filesystem::path Resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  if (path.empty()) return path;
  if (path.is_relative()) path = base / path;
  return path.lexically_normal();
}

ModelKind KindOrThrow(const std::string& name) {
  const auto kind = ParseModelKind(name);
  if (!kind) Invalid("unknown model '" + name + "'");
  return *kind;
}

std::string OffsetText(int minutes) {
  const char sign = minutes < 0 ? '-' : '+';
  const int a = std::abs(minutes);
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%c%02d:%02d", sign, a / 60, a % 60);
  return buf;
}

}  // namespace

RunConfig::RunConfig() {
  for (ModelKind kind : kAllModelKinds) {
    models[static_cast<std::size_t>(kind)] = RegressorSpec::Default(kind).params;
  }
  benchmark_models.assign(kAllModelKinds.begin(), kAllModelKinds.end());
}

std::vector<Hyperparams> RunConfig::grid(ModelKind kind) const {
  const auto& g = grids[static_cast<std::size_t>(kind)];
  return g.empty() ? DefaultGrid(kind) : g;
}

RunConfig ParseRunConfig(std::string_view text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    Invalid(std::string("config is not valid JSON: ") + e.what());
  }
  CheckKeys(doc, "config",
            {"schema_id", "paths", "pipeline", "models", "benchmark", "tuning", "lime",
             "plot", "report_formats", "threads"});
  if (!doc.contains("schema_id") || doc["schema_id"] != kConfigSchema) {
    Invalid("config schema_id must be '" + std::string(kConfigSchema) + "'");
  }
  RunConfig cfg;
  try {
    if (doc.contains("paths")) {
      const json& p = doc["paths"];
      CheckKeys(p, "paths", {"energy_csv", "weather_csv", "output_dir"});
      std::string s;
      if (p.contains("energy_csv")) {
        Read(p, "energy_csv", "paths", s);
        cfg.energy_csv = Resolve(base_dir, s);
      }
      if (p.contains("weather_csv")) {
        Read(p, "weather_csv", "paths", s);
        cfg.weather_csv = Resolve(base_dir, s);
      }
      if (p.contains("output_dir")) {
        Read(p, "output_dir", "paths", s);
        cfg.output_dir = Resolve(base_dir, s);
      }
    }
    if (doc.contains("pipeline")) {
      const json& p = doc["pipeline"];
      CheckKeys(p, "pipeline",
                {"target_column", "feature_count", "train_fraction", "max_interp_gap",
                 "split_mode", "seed", "source_utc_offset", "exclude_columns"});
      auto& pc = cfg.pipeline;
      Read(p, "target_column", "pipeline", pc.target_column);
      Read(p, "feature_count", "pipeline", pc.feature_count);
      Read(p, "train_fraction", "pipeline", pc.train_fraction);
      Read(p, "max_interp_gap", "pipeline", pc.max_interp_gap);
      Read(p, "seed", "pipeline", pc.seed);
      if (p.contains("split_mode")) {
        std::string mode;
        Read(p, "split_mode", "pipeline", mode);
        if (mode == "chronological") pc.split_mode = SplitMode::kChronological;
        else if (mode == "random") pc.split_mode = SplitMode::kRandom;
        else Invalid("pipeline.split_mode must be 'chronological' or 'random'");
      }
      if (p.contains("source_utc_offset")) {
        std::string off;
        Read(p, "source_utc_offset", "pipeline", off);
        const auto minutes = ParseUtcOffset(off);
        if (!minutes) Invalid("pipeline.source_utc_offset '" + off + "' is not an offset");
        pc.source_utc_offset_minutes = *minutes;
      }
      if (p.contains("exclude_columns")) {
        pc.exclude_columns = p.at("exclude_columns").get<std::vector<std::string>>();
      }
    }
    if (doc.contains("models")) {
      const json& m = doc["models"];
      if (!m.is_object()) Invalid("models must be an object");
      for (const auto& item : m.items()) {
        const ModelKind kind = KindOrThrow(item.key());
        cfg.models[static_cast<std::size_t>(kind)] =
            HyperparamsFromJson(kind, item.value().dump());
        RegressorSpec{cfg.models[static_cast<std::size_t>(kind)]}.Validate();
      }
    }
    if (doc.contains("benchmark")) {
      const json& b = doc["benchmark"];
      CheckKeys(b, "benchmark", {"models"});
      if (b.contains("models")) {
        cfg.benchmark_models.clear();
        for (const auto& name : b.at("models").get<std::vector<std::string>>()) {
          cfg.benchmark_models.push_back(KindOrThrow(name));
        }
        std::sort(cfg.benchmark_models.begin(), cfg.benchmark_models.end());
        cfg.benchmark_models.erase(
            std::unique(cfg.benchmark_models.begin(), cfg.benchmark_models.end()),
            cfg.benchmark_models.end());
      }
    }
    if (doc.contains("tuning")) {
      const json& t = doc["tuning"];
      CheckKeys(t, "tuning", {"folds", "fold_mode", "grids"});
      Read(t, "folds", "tuning", cfg.cv_folds);
      if (t.contains("fold_mode")) {
        std::string mode;
        Read(t, "fold_mode", "tuning", mode);
        const auto parsed = ParseFoldMode(mode);
        if (!parsed) Invalid("tuning.fold_mode must be 'contiguous' or 'random'");
        cfg.cv_mode = *parsed;
      }
      if (t.contains("grids")) {
        const json& g = t.at("grids");
        if (!g.is_object()) Invalid("tuning.grids must be an object");
        for (const auto& item : g.items()) {
          const ModelKind kind = KindOrThrow(item.key());
          if (!item.value().is_array()) Invalid("tuning.grids." + item.key() + " must be an array");
          auto& grid = cfg.grids[static_cast<std::size_t>(kind)];
          grid.clear();
          for (const auto& rec : item.value()) {
            grid.push_back(HyperparamsFromJson(kind, rec.dump()));
          }
        }
      }
    }
    if (doc.contains("lime")) {
      const json& l = doc["lime"];
      CheckKeys(l, "lime",
                {"n_samples", "kernel_width", "perturb_scale", "surrogate_l2", "seed",
                 "discretize", "top_k"});
      auto& lc = cfg.lime;
      Read(l, "n_samples", "lime", lc.n_samples);
      if (l.contains("kernel_width") && !l.at("kernel_width").is_null()) {
        double w = 0.0;
        Read(l, "kernel_width", "lime", w);
        lc.kernel_width = w;
      }
      Read(l, "perturb_scale", "lime", lc.perturb_scale);
      Read(l, "surrogate_l2", "lime", lc.surrogate_l2);
      Read(l, "seed", "lime", lc.seed);
      Read(l, "discretize", "lime", lc.discretize);
      Read(l, "top_k", "lime", lc.top_k);
    }
    if (doc.contains("plot")) {
      const json& p = doc["plot"];
      CheckKeys(p, "plot", {"histogram_bin_width", "series_length"});
      Read(p, "histogram_bin_width", "plot", cfg.histogram_bin_width);
      Read(p, "series_length", "plot", cfg.series_length);
      if (!(cfg.histogram_bin_width > 0.0)) Invalid("plot.histogram_bin_width must be > 0");
    }
    if (doc.contains("report_formats")) {
      cfg.write_csv = cfg.write_json = false;
      for (const auto& f : doc.at("report_formats").get<std::vector<std::string>>()) {
        if (f == "csv") cfg.write_csv = true;
        else if (f == "json") cfg.write_json = true;
        else Invalid("report_formats entries must be 'csv' or 'json'");
      }
    }
    Read(doc, "threads", "config", cfg.threads);
  } catch (const json::exception& e) {
    Invalid(std::string("config: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInvalidConfig) throw;
    Invalid(e.what());
  }
  return cfg;
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  const std::string text = ReadTextFile(path);
  try {
    return ParseRunConfig(text, path.parent_path());
  } catch (const Error& e) {
    throw e.WithContext(path.string());
  }
}

std::string RunConfigToJson(const RunConfig& cfg) {
  ordered_json j;
  j["schema_id"] = kConfigSchema;
  j["paths"] = {{"energy_csv", cfg.energy_csv.string()},
                {"weather_csv", cfg.weather_csv.string()},
                {"output_dir", cfg.output_dir.string()}};
  const auto& pc = cfg.pipeline;
  j["pipeline"] = {
      {"target_column", pc.target_column},
      {"feature_count", pc.feature_count},
      {"train_fraction", pc.train_fraction},
      {"max_interp_gap", pc.max_interp_gap},
      {"split_mode", pc.split_mode == SplitMode::kChronological ? "chronological" : "random"},
      {"seed", pc.seed},
      {"source_utc_offset", OffsetText(pc.source_utc_offset_minutes)},
      {"exclude_columns", pc.exclude_columns}};
  ordered_json models = ordered_json::object();
  for (ModelKind kind : kAllModelKinds) {
    models[std::string(ModelKindName(kind))] =
        ordered_json::parse(HyperparamsToJson(cfg.params(kind)));
  }
  j["models"] = std::move(models);
  ordered_json bench = ordered_json::array();
  for (ModelKind kind : cfg.benchmark_models) bench.push_back(ModelKindName(kind));
  j["benchmark"] = {{"models", bench}};
  ordered_json grids = ordered_json::object();
  for (ModelKind kind : kAllModelKinds) {
    ordered_json g = ordered_json::array();
    for (const auto& rec : cfg.grid(kind)) g.push_back(ordered_json::parse(HyperparamsToJson(rec)));
    grids[std::string(ModelKindName(kind))] = std::move(g);
  }
  j["tuning"] = {{"folds", cfg.cv_folds},
                 {"fold_mode", FoldModeName(cfg.cv_mode)},
                 {"grids", std::move(grids)}};
  j["lime"] = ordered_json::parse(LimeConfigToJson(cfg.lime));
  j["plot"] = {{"histogram_bin_width", cfg.histogram_bin_width},
               {"series_length", cfg.series_length}};
  ordered_json formats = ordered_json::array();
  if (cfg.write_csv) formats.push_back("csv");
  if (cfg.write_json) formats.push_back("json");
  j["report_formats"] = std::move(formats);
  j["threads"] = cfg.threads;
  return j.dump(1) + "\n";
}

}  // namespace epf::app
