#include "epf/model_io.h"

#include "epf/csv.h"
#include "epf/error.h"
#include "json.hpp"

namespace epf {

namespace {

using nlohmann::json;

[[noreturn]] void LoadFail(const std::string& what) {
  throw Error(ErrorCode::kModelLoadFailure, what);
}

// Field enumeration shared by serialization, parsing and description.
template <class F> void Fields(LinearParams&, F&&) {}
template <class F> void Fields(RidgeParams& p, F&& f) { f("alpha", p.alpha); }
template <class F> void Fields(TreeParams& p, F&& f) {
  f("max_depth", p.max_depth);
  f("min_samples_leaf", p.min_samples_leaf);
}
template <class F> void Fields(KnnParams& p, F&& f) {
  f("k", p.k);
  f("weighting", p.weighting);
}
template <class F> void Fields(ForestParams& p, F&& f) {
  f("n_trees", p.n_trees);
  f("feature_ratio", p.feature_ratio);
  f("max_depth", p.max_depth);
  f("min_samples_leaf", p.min_samples_leaf);
  f("bootstrap", p.bootstrap);
  f("sampling", p.sampling);
}
template <class F> void Fields(GradBoostParams& p, F&& f) {
  f("n_stages", p.n_stages);
  f("learning_rate", p.learning_rate);
  f("max_depth", p.max_depth);
  f("min_samples_leaf", p.min_samples_leaf);
}
template <class F> void Fields(SvrParams& p, F&& f) {
  f("C", p.c);
  f("gamma", p.gamma);
  f("epsilon", p.epsilon);
  f("tol", p.tol);
  f("max_iterations", p.max_iterations);
  f("max_train", p.max_train);
  f("cache_mb", p.cache_mb);
}
template <class F> void Fields(XgbParams& p, F&& f) {
  f("n_stages", p.n_stages);
  f("learning_rate", p.learning_rate);
  f("max_depth", p.max_depth);
  f("subsample", p.subsample);
  f("colsample", p.colsample);
  f("lambda", p.lambda);
  f("min_child_weight", p.min_child_weight);
}

std::string EnumText(KnnWeighting w) {
  return w == KnnWeighting::kUniform ? "uniform" : "inverse_distance";
}
std::string EnumText(FeatureSampling s) {
  return s == FeatureSampling::kPerTree ? "per_tree" : "per_split";
}

template <class T>
json ToJson(const T& value) {
  if constexpr (std::is_enum_v<T>) {
    return EnumText(value);
  } else {
    return value;
  }
}

template <class T>
void FromJson(const json& j, T& out) {
  if constexpr (std::is_same_v<T, KnnWeighting>) {
    const auto s = j.get<std::string>();
    if (s == "uniform") out = KnnWeighting::kUniform;
    else if (s == "inverse_distance") out = KnnWeighting::kInverseDistance;
    else throw Error(ErrorCode::kInvalidConfig, "unknown weighting '" + s + "'");
  } else if constexpr (std::is_same_v<T, FeatureSampling>) {
    const auto s = j.get<std::string>();
    if (s == "per_split") out = FeatureSampling::kPerSplit;
    else if (s == "per_tree") out = FeatureSampling::kPerTree;
    else throw Error(ErrorCode::kInvalidConfig, "unknown sampling '" + s + "'");
  } else if constexpr (std::is_same_v<T, bool>) {
    if (!j.is_boolean()) throw Error(ErrorCode::kInvalidConfig, "expected a boolean");
    out = j.get<bool>();
  } else if constexpr (std::is_integral_v<T>) {
    if (!j.is_number_integer()) throw Error(ErrorCode::kInvalidConfig, "expected an integer");
    out = j.get<T>();
  } else {
    if (!j.is_number()) throw Error(ErrorCode::kInvalidConfig, "expected a number");
    out = j.get<T>();
  }
}

json ParamsJson(const Hyperparams& params) {
  json out = json::object();
  std::visit(
      [&](auto p) {
        Fields(p, [&](const char* name, const auto& v) { out[name] = ToJson(v); });
      },
      params);
  return out;
}

Hyperparams ParamsFromJson(ModelKind kind, const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kInvalidConfig, "hyperparameters must be an object");
  Hyperparams params = RegressorSpec::Default(kind).params;
  std::visit(
      [&](auto& p) {
        std::size_t matched = 0;
        Fields(p, [&](const char* name, auto& v) {
          if (!j.contains(name)) return;
          ++matched;
          try {
            FromJson(j.at(name), v);
          } catch (const Error& e) {
            throw Error(ErrorCode::kInvalidConfig,
                        std::string(ModelKindName(kind)) + "." + name + ": " + e.what());
          } catch (const json::exception& e) {
            throw Error(ErrorCode::kInvalidConfig,
                        std::string(ModelKindName(kind)) + "." + name + ": " + e.what());
          }
        });
        if (matched != j.size()) {
          for (const auto& item : j.items()) {
            bool known = false;
            Fields(p, [&](const char* name, auto&) { known = known || item.key() == name; });
            if (!known) {
              throw Error(ErrorCode::kInvalidConfig,
                          "unknown hyperparameter '" + item.key() + "' for " +
                              std::string(ModelKindName(kind)));
            }
          }
        }
      },
      params);
  return params;
}

json MatrixJson(const Matrix& m) {
  return json{{"rows", m.rows()},
              {"cols", m.cols()},
              {"data", std::vector<double>(m.data(), m.data() + m.size())}};
}

Matrix MatrixFromJson(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (rows < 0 || cols < 0 || static_cast<Eigen::Index>(data.size()) != rows * cols) {
    LoadFail("matrix shape does not match its data");
  }
  return Eigen::Map<const Matrix>(data.data(), rows, cols);
}

json VectorJson(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Vector VectorFromJson(const json& j) {
  const auto data = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(data.data(), static_cast<Eigen::Index>(data.size()));
}

// Column layout: one array per node field.
json TreeJson(const Tree& tree) {
  json feature = json::array(), threshold = json::array(), left = json::array(),
       right = json::array(), value = json::array(), n = json::array(),
       gain = json::array(), depth = json::array();
  for (const TreeNode& node : tree.nodes) {
    feature.push_back(node.feature);
    threshold.push_back(node.threshold);
    left.push_back(node.left);
    right.push_back(node.right);
    value.push_back(node.value);
    n.push_back(node.n_samples);
    gain.push_back(node.gain);
    depth.push_back(node.depth);
  }
  return json{{"feature", feature}, {"threshold", threshold}, {"left", left},
              {"right", right},     {"value", value},         {"n_samples", n},
              {"gain", gain},       {"depth", depth}};
}

Tree TreeFromJson(const json& j, std::size_t feature_count) {
  const auto feature = j.at("feature").get<std::vector<int>>();
  const auto threshold = j.at("threshold").get<std::vector<double>>();
  const auto left = j.at("left").get<std::vector<int>>();
  const auto right = j.at("right").get<std::vector<int>>();
  const auto value = j.at("value").get<std::vector<double>>();
  const auto n = j.at("n_samples").get<std::vector<double>>();
  const auto gain = j.at("gain").get<std::vector<double>>();
  const auto depth = j.at("depth").get<std::vector<int>>();
  const std::size_t count = feature.size();
  for (std::size_t len : {threshold.size(), left.size(), right.size(), value.size(),
                          n.size(), gain.size(), depth.size()}) {
    if (len != count) LoadFail("tree node arrays differ in length");
  }
  if (count == 0) LoadFail("tree without nodes");
  Tree tree;
  tree.nodes.resize(count);
  const auto in_range = [&](int child, std::size_t self) {
    return child > static_cast<int>(self) && child < static_cast<int>(count);
  };
  for (std::size_t i = 0; i < count; ++i) {
    TreeNode& node = tree.nodes[i];
    node = TreeNode{feature[i], threshold[i], left[i], right[i],
                    value[i],   n[i],         gain[i], depth[i]};
    if (node.is_leaf()) continue;
    // Children always follow their parent, which also rules out cycles.
    if (static_cast<std::size_t>(node.feature) >= feature_count ||
        !in_range(node.left, i) || !in_range(node.right, i)) {
      LoadFail("tree node " + std::to_string(i) + " is inconsistent");
    }
  }
  return tree;
}

json StateJson(const ModelState& state) {
  return std::visit(
      [](const auto& s) -> json {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, LinearState>) {
          return json{{"coefficients", VectorJson(s.coefficients)},
                      {"intercept", s.intercept}};
        } else if constexpr (std::is_same_v<S, TreeState>) {
          return json{{"tree", TreeJson(s.tree)}};
        } else if constexpr (std::is_same_v<S, KnnState>) {
          return json{{"x", MatrixJson(s.x)}, {"y", VectorJson(s.y)}};
        } else if constexpr (std::is_same_v<S, ForestState>) {
          json trees = json::array();
          for (const Tree& t : s.trees) trees.push_back(TreeJson(t));
          return json{{"trees", trees}};
        } else if constexpr (std::is_same_v<S, BoostState>) {
          json trees = json::array();
          for (const Tree& t : s.trees) trees.push_back(TreeJson(t));
          return json{{"base", s.base}, {"learning_rate", s.learning_rate}, {"trees", trees}};
        } else {
          return json{{"support", MatrixJson(s.support)},
                      {"dual_coef", VectorJson(s.dual_coef)},
                      {"bias", s.bias},
                      {"converged", s.converged},
                      {"final_violation", s.final_violation},
                      {"iterations", s.iterations},
                      {"rows_used", s.rows_used},
                      {"rows_total", s.rows_total}};
        }
      },
      state);
}

ModelState StateFromJson(ModelKind kind, const json& j, std::size_t d) {
  const auto check_width = [&](Eigen::Index cols) {
    if (static_cast<std::size_t>(cols) != d) LoadFail("stored rows have the wrong width");
  };
  switch (kind) {
    case ModelKind::kLinear:
    case ModelKind::kRidge: {
      LinearState s{VectorFromJson(j.at("coefficients")), j.at("intercept").get<double>()};
      check_width(s.coefficients.size());
      return s;
    }
    case ModelKind::kDecisionTree:
      return TreeState{TreeFromJson(j.at("tree"), d)};
    case ModelKind::kKnn: {
      KnnState s{MatrixFromJson(j.at("x")), VectorFromJson(j.at("y"))};
      check_width(s.x.cols());
      if (s.x.rows() != s.y.size() || s.x.rows() == 0) LoadFail("KNN training set is malformed");
      return s;
    }
    case ModelKind::kRandomForest: {
      ForestState s;
      for (const auto& t : j.at("trees")) s.trees.push_back(TreeFromJson(t, d));
      if (s.trees.empty()) LoadFail("forest without trees");
      return s;
    }
    case ModelKind::kGradBoost:
    case ModelKind::kXgbLike: {
      BoostState s;
      s.base = j.at("base").get<double>();
      s.learning_rate = j.at("learning_rate").get<double>();
      for (const auto& t : j.at("trees")) s.trees.push_back(TreeFromJson(t, d));
      return s;
    }
    case ModelKind::kSvr: {
      SvrState s;
      s.support = MatrixFromJson(j.at("support"));
      s.dual_coef = VectorFromJson(j.at("dual_coef"));
      s.bias = j.at("bias").get<double>();
      s.converged = j.at("converged").get<bool>();
      s.final_violation = j.at("final_violation").get<double>();
      s.iterations = j.at("iterations").get<std::int64_t>();
      s.rows_used = j.at("rows_used").get<std::size_t>();
      s.rows_total = j.at("rows_total").get<std::size_t>();
      if (s.support.rows() > 0) check_width(s.support.cols());
      if (s.support.rows() != s.dual_coef.size()) LoadFail("SVR coefficient count mismatch");
      if (s.support.rows() == 0) s.support.resize(0, static_cast<Eigen::Index>(d));
      return s;
    }
  }
  LoadFail("unknown model kind");
}

}  // namespace

std::string HyperparamsToJson(const Hyperparams& params) {
  return ParamsJson(params).dump();
}

Hyperparams HyperparamsFromJson(ModelKind kind, std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("invalid JSON: ") + e.what());
  }
  return ParamsFromJson(kind, j);
}

std::string DescribeHyperparams(const Hyperparams& params) {
  std::string out;
  std::visit(
      [&](auto p) {
        Fields(p, [&](const char* name, const auto& v) {
          using V = std::decay_t<decltype(v)>;
          if (!out.empty()) out += ';';
          out += name;
          out += '=';
          if constexpr (std::is_enum_v<V>) {
            out += EnumText(v);
          } else if constexpr (std::is_same_v<V, bool>) {
            out += v ? "true" : "false";
          } else if constexpr (std::is_integral_v<V>) {
            out += std::to_string(v);
          } else {
            out += FormatDouble(v);
          }
        });
      },
      params);
  return out;
}

std::string SerializeModel(const FittedModel& model) {
  json doc;
  doc["schema_id"] = kModelSchema;
  doc["kind"] = ModelKindName(model.kind());
  doc["hyperparams"] = ParamsJson(model.spec().params);
  doc["seed"] = model.spec().seed;
  doc["feature_names"] = model.feature_names();
  doc["state"] = StateJson(model.state());
  return doc.dump() + "\n";
}

FittedModel ParseModel(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    LoadFail(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("schema_id") || doc["schema_id"] != kModelSchema) {
    LoadFail("expected schema_id '" + std::string(kModelSchema) + "'");
  }
  try {
    const auto kind = ParseModelKind(doc.at("kind").get<std::string>());
    if (!kind) LoadFail("unknown model kind");
    RegressorSpec spec;
    spec.params = ParamsFromJson(*kind, doc.at("hyperparams"));
    spec.seed = doc.at("seed").get<std::uint64_t>();
    spec.Validate();
    auto names = doc.at("feature_names").get<std::vector<std::string>>();
    ModelState state = StateFromJson(*kind, doc.at("state"), names.size());
    return FittedModel(std::move(spec), std::move(state), std::move(names));
  } catch (const json::exception& e) {
    LoadFail(std::string("malformed model: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kModelLoadFailure) throw;
    LoadFail(std::string("malformed model: ") + e.what());
  }
}

void SaveModel(const FittedModel& model, const std::filesystem::path& path) {
  WriteFileAtomic(path, SerializeModel(model));
}

FittedModel LoadModel(const std::filesystem::path& path) {
  std::string text;
  try {
    text = ReadTextFile(path);
  } catch (const Error& e) {
    LoadFail(e.what());
  }
  try {
    return ParseModel(text);
  } catch (const Error& e) {
    throw e.WithContext(path.string());
  }
}

}  // namespace epf
