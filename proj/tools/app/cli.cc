#include "cli.h"

#include <optional>
#include <string>

#include "CLI11.hpp"
#include "commands.h"
#include "epf/error.h"
#include "epf/parallel.h"

namespace epf::app {

namespace {

namespace fs = std::filesystem;

struct CommonFlags {
  std::string config;
  std::string energy;
  std::string weather;
  std::string output;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
};

void AddCommon(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("-c,--config", f.config, "JSON run configuration")->check(CLI::ExistingFile);
  cmd->add_option("--energy", f.energy, "Energy CSV (overrides the config)");
  cmd->add_option("--weather", f.weather, "Weather CSV (overrides the config)");
  cmd->add_option("-o,--output", f.output, "Output directory (overrides the config)");
  cmd->add_option("--seed", f.seed, "Seed for splitting, models and LIME");
  cmd->add_option("--threads", f.threads, "Worker threads, 0 = all cores");
}

fs::path Absolute(const std::string& p) {
  return fs::absolute(fs::path(p)).lexically_normal();
}

RunConfig Build(const CommonFlags& f) {
  RunConfig cfg;
  if (!f.config.empty()) {
    cfg = LoadRunConfig(Absolute(f.config));
  } else {
    cfg.output_dir = Absolute(cfg.output_dir.string());
  }
  if (!f.energy.empty()) cfg.energy_csv = Absolute(f.energy);
  if (!f.weather.empty()) cfg.weather_csv = Absolute(f.weather);
  if (!f.output.empty()) cfg.output_dir = Absolute(f.output);
  if (f.seed) {
    cfg.pipeline.seed = *f.seed;
    cfg.lime.seed = *f.seed;
  }
  if (f.threads) cfg.threads = *f.threads;
  SetThreadCount(cfg.threads);
  return cfg;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Electricity price forecasting workbench"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "epf 0.3.0");

  CommonFlags pre_f, bench_f, tune_f, explain_f, plot_f;

  auto* pre = app.add_subcommand("preprocess", "Build train/test feature matrices");
  AddCommon(pre, pre_f);
  std::optional<std::string> target, split_mode;
  std::optional<std::size_t> features;
  std::optional<double> train_fraction;
  pre->add_option("--target", target, "Target column");
  pre->add_option("--features", features, "Number of selected features");
  pre->add_option("--train-fraction", train_fraction, "Training share in (0, 1)");
  pre->add_option("--split-mode", split_mode, "chronological or random")
      ->check(CLI::IsMember({"chronological", "random"}));

  auto* bench = app.add_subcommand("benchmark", "Fit and score all models");
  AddCommon(bench, bench_f);

  auto* tune = app.add_subcommand("tune", "Grid search with k-fold cross-validation");
  AddCommon(tune, tune_f);
  std::string tune_model;
  std::optional<std::size_t> folds;
  tune->add_option("model", tune_model, "Model kind, e.g. Ridge or KNN")->required();
  tune->add_option("--folds", folds, "Fold count");

  auto* explain = app.add_subcommand("explain", "LIME explanation of one prediction");
  AddCommon(explain, explain_f);
  std::string explain_model, row_file;
  std::optional<std::size_t> row;
  explain->add_option("--model", explain_model, "Model file (default: models/KNN.model.json)");
  auto* row_opt = explain->add_option("--row", row, "Test-matrix row index");
  explain->add_option("--row-file", row_file, "CSV holding one raw feature row")
      ->excludes(row_opt);

  auto* plot = app.add_subcommand("plot-data", "Scatter, series and error histogram data");
  AddCommon(plot, plot_f);
  std::string plot_model;
  std::optional<double> bin_width;
  plot->add_option("--model", plot_model, "Model file (default: models/KNN.model.json)");
  plot->add_option("--bin-width", bin_width, "Histogram bin width in price units");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (pre->parsed()) {
      RunConfig cfg = Build(pre_f);
      if (target) cfg.pipeline.target_column = *target;
      if (features) cfg.pipeline.feature_count = *features;
      if (train_fraction) cfg.pipeline.train_fraction = *train_fraction;
      if (split_mode) {
        cfg.pipeline.split_mode =
            *split_mode == "random" ? SplitMode::kRandom : SplitMode::kChronological;
      }
      CmdPreprocess(cfg, out);
    } else if (bench->parsed()) {
      CmdBenchmark(Build(bench_f), out);
    } else if (tune->parsed()) {
      RunConfig cfg = Build(tune_f);
      const auto kind = ParseModelKind(tune_model);
      if (!kind) {
        err << "error: unknown model '" << tune_model << "'\n";
        return kExitUsage;
      }
      if (folds) cfg.cv_folds = *folds;
      CmdTune(cfg, *kind, out);
    } else if (explain->parsed()) {
      RunConfig cfg = Build(explain_f);
      ExplainRequest req;
      if (!explain_model.empty()) req.model_file = Absolute(explain_model);
      if (!row_file.empty()) req.row_file = Absolute(row_file);
      req.row_index = row;
      CmdExplain(cfg, req, out);
    } else if (plot->parsed()) {
      RunConfig cfg = Build(plot_f);
      if (bin_width) cfg.histogram_bin_width = *bin_width;
      std::optional<fs::path> model;
      if (!plot_model.empty()) model = Absolute(plot_model);
      CmdPlotData(cfg, model, out);
    }
  } catch (const Error& e) {
    err << "error [" << ErrorCodeName(e.code()) << "]: " << e.what() << "\n";
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    err << "unexpected error: " << e.what() << "\n";
    return kExitUnexpected;
  }
  return kExitOk;
}

}  // namespace epf::app
