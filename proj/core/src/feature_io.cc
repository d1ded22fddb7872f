#include "epf/feature_io.h"

#include "epf/error.h"
#include "json.hpp"

namespace epf {

namespace {

using nlohmann::json;

json ParseJson(std::string_view text, std::string_view what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchemaMismatch,
                std::string(what) + ": invalid JSON: " + e.what());
  }
}

void RequireSchema(const json& doc, std::string_view schema) {
  if (!doc.is_object() || !doc.contains("schema_id") ||
      doc["schema_id"] != schema) {
    throw Error(ErrorCode::kSchemaMismatch,
                "expected schema_id '" + std::string(schema) + "'");
  }
}

json ScalerJson(const ScalerParams& p) {
  return json{{"means", p.means}, {"stds", p.stds}};
}

ScalerParams ScalerFromJson(const json& j) {
  return ScalerParams{j.at("means").get<std::vector<double>>(),
                      j.at("stds").get<std::vector<double>>()};
}

}  // namespace

std::string SerializeFeatureMatrix(const FeatureMatrix& m) {
  json doc;
  doc["schema_id"] = kFeatureMatrixSchema;
  doc["feature_names"] = m.feature_names;
  doc["target_name"] = m.target_name;
  doc["scaler"] = m.scaler ? ScalerJson(*m.scaler) : json(nullptr);
  json ts = json::array();
  for (Timestamp t : m.timestamps) ts.push_back(FormatIso8601(t));
  doc["timestamps"] = std::move(ts);
  doc["rows"] = m.rows();
  doc["cols"] = m.cols();
  doc["x"] = std::vector<double>(m.x.data(), m.x.data() + m.x.size());
  doc["y"] = std::vector<double>(m.y.data(), m.y.data() + m.y.size());
  return doc.dump(1) + "\n";
}

FeatureMatrix ParseFeatureMatrix(std::string_view text) {
  const json doc = ParseJson(text, "feature matrix");
  RequireSchema(doc, kFeatureMatrixSchema);
  try {
    FeatureMatrix m;
    m.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
    m.target_name = doc.at("target_name").get<std::string>();
    if (!doc.at("scaler").is_null()) m.scaler = ScalerFromJson(doc.at("scaler"));
    for (const auto& t : doc.at("timestamps")) {
      const auto ts = ParseIso8601(t.get<std::string>());
      if (!ts) throw Error(ErrorCode::kSchemaMismatch, "bad timestamp in matrix");
      m.timestamps.push_back(*ts);
    }
    const auto rows = doc.at("rows").get<Eigen::Index>();
    const auto cols = doc.at("cols").get<Eigen::Index>();
    const auto x = doc.at("x").get<std::vector<double>>();
    const auto y = doc.at("y").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(x.size()) != rows * cols ||
        static_cast<Eigen::Index>(y.size()) != rows ||
        static_cast<Eigen::Index>(m.timestamps.size()) != rows ||
        static_cast<Eigen::Index>(m.feature_names.size()) != cols) {
      throw Error(ErrorCode::kSchemaMismatch, "feature matrix shape mismatch");
    }
    m.x = Eigen::Map<const Matrix>(x.data(), rows, cols);
    m.y = Eigen::Map<const Vector>(y.data(), rows);
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchemaMismatch,
                std::string("feature matrix: ") + e.what());
  }
}

std::string FeatureMatrixToCsv(const FeatureMatrix& m) {
  std::vector<std::string> header{"timestamp"};
  header.insert(header.end(), m.feature_names.begin(), m.feature_names.end());
  header.push_back(m.target_name.empty() ? "target" : m.target_name);
  std::string out = JoinCsvRow(header);
  std::vector<std::string> fields(header.size());
  for (Eigen::Index i = 0; i < m.x.rows(); ++i) {
    fields[0] = FormatIso8601(m.timestamps[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < m.x.cols(); ++j) {
      fields[static_cast<std::size_t>(j) + 1] = FormatDouble(m.x(i, j));
    }
    fields.back() = FormatDouble(m.y(i));
    out += JoinCsvRow(fields);
  }
  return out;
}

std::string SerializeFeatureSpec(const FeatureSpec& spec) {
  json doc;
  doc["schema_id"] = kFeatureSpecSchema;
  doc["target_name"] = spec.target_name;
  doc["selected"] = spec.selected;
  json corr = json::array();
  for (const auto& c : spec.correlations) {
    corr.push_back(json{{"name", c.name}, {"pearson_r", c.pearson_r}});
  }
  doc["correlations"] = std::move(corr);
  return doc.dump(1) + "\n";
}

FeatureSpec ParseFeatureSpec(std::string_view text) {
  const json doc = ParseJson(text, "feature spec");
  RequireSchema(doc, kFeatureSpecSchema);
  try {
    FeatureSpec spec;
    spec.target_name = doc.at("target_name").get<std::string>();
    spec.selected = doc.at("selected").get<std::vector<std::string>>();
    for (const auto& c : doc.at("correlations")) {
      spec.correlations.push_back(
          {c.at("name").get<std::string>(), c.at("pearson_r").get<double>()});
    }
    return spec;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchemaMismatch, std::string("feature spec: ") + e.what());
  }
}

std::string SerializeScaler(const ScalerParams& params,
                            const std::vector<std::string>& feature_names) {
  json doc = ScalerJson(params);
  doc["schema_id"] = kScalerSchema;
  doc["feature_names"] = feature_names;
  return doc.dump(1) + "\n";
}

ScalerParams ParseScaler(std::string_view text) {
  const json doc = ParseJson(text, "scaler");
  RequireSchema(doc, kScalerSchema);
  try {
    return ScalerFromJson(doc);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchemaMismatch, std::string("scaler: ") + e.what());
  }
}

}  // namespace epf
