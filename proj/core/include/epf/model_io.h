#ifndef EPF_MODEL_IO_H_
#define EPF_MODEL_IO_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "epf/regressors.h"

namespace epf {

inline constexpr std::string_view kModelSchema = "epf.model/1";

// Compact JSON object of every hyperparameter of `params`.
std::string HyperparamsToJson(const Hyperparams& params);

// Starts from the defaults of `kind` and overrides the keys present in the
// JSON object `text`. Unknown keys or wrongly typed values throw
// kInvalidConfig. The result is not validated.
Hyperparams HyperparamsFromJson(ModelKind kind, std::string_view text);

// "alpha=0.1", "k=5;weighting=inverse_distance", ... Stable field order.
std::string DescribeHyperparams(const Hyperparams& params);

// Schema id, kind, hyperparameters, seed, feature names and learned state.
// Doubles use shortest round-trip form, so a parsed model predicts bit for bit
// like the original.
std::string SerializeModel(const FittedModel& model);

// Throws kModelLoadFailure on malformed or mismatched documents.
FittedModel ParseModel(std::string_view text);

void SaveModel(const FittedModel& model, const std::filesystem::path& path);
FittedModel LoadModel(const std::filesystem::path& path);

}  // namespace epf

#endif  // EPF_MODEL_IO_H_
