#ifndef EPF_TOOLS_CONFIG_H_
#define EPF_TOOLS_CONFIG_H_

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "epf/data_pipeline.h"
#include "epf/lime.h"
#include "epf/model_selection.h"
#include "epf/regressors.h"

namespace epf::app {

inline constexpr std::string_view kConfigSchema = "epf.config/1";

struct RunConfig {
  std::filesystem::path energy_csv;
  std::filesystem::path weather_csv;
  std::filesystem::path output_dir = "out";

  PipelineConfig pipeline;

  // Effective hyperparameters per kind, indexed by ModelKind.
  std::array<Hyperparams, 8> models;
  // Kinds trained by `benchmark`, in table order.
  std::vector<ModelKind> benchmark_models;

  std::size_t cv_folds = 5;
  FoldMode cv_mode = FoldMode::kContiguous;
  // Empty entries fall back to DefaultGrid.
  std::array<std::vector<Hyperparams>, 8> grids;

  LimeConfig lime;

  double histogram_bin_width = 1.0;
  std::size_t series_length = 100;

  bool write_csv = true;
  bool write_json = true;

  // 0 = hardware concurrency.
  std::size_t threads = 0;

  RunConfig();

  const Hyperparams& params(ModelKind kind) const {
    return models[static_cast<std::size_t>(kind)];
  }
  RegressorSpec spec(ModelKind kind) const {
    return RegressorSpec{params(kind), pipeline.seed};
  }
  std::vector<Hyperparams> grid(ModelKind kind) const;
};

// Parses a JSON config. Missing keys keep their defaults; unknown keys and
// wrong types throw kInvalidConfig. Relative paths resolve against
// `base_dir`.
RunConfig ParseRunConfig(std::string_view text,
                         const std::filesystem::path& base_dir);
RunConfig LoadRunConfig(const std::filesystem::path& path);

// Every key with its effective value. Parsing the result yields an identical
// configuration.
std::string RunConfigToJson(const RunConfig& config);

}  // namespace epf::app

#endif  // EPF_TOOLS_CONFIG_H_
