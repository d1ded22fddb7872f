#ifndef EPF_FEATURE_IO_H_
#define EPF_FEATURE_IO_H_

#include <string>
#include <string_view>

#include "epf/data_pipeline.h"

namespace epf {

inline constexpr std::string_view kFeatureMatrixSchema = "epf.feature_matrix/1";
inline constexpr std::string_view kFeatureSpecSchema = "epf.feature_spec/1";
inline constexpr std::string_view kScalerSchema = "epf.scaler/1";

// JSON document: schema id, feature names, target name, scaler params (or
// null), ISO-8601 timestamps, shape and row-major values. Doubles are written
// in shortest round-trip form so parsing restores them bit for bit, and equal
// matrices always serialize to identical bytes.
std::string SerializeFeatureMatrix(const FeatureMatrix& m);
FeatureMatrix ParseFeatureMatrix(std::string_view text);

// Header "timestamp,<features...>,<target>", one line per row.
std::string FeatureMatrixToCsv(const FeatureMatrix& m);

std::string SerializeFeatureSpec(const FeatureSpec& spec);
FeatureSpec ParseFeatureSpec(std::string_view text);

std::string SerializeScaler(const ScalerParams& params,
                            const std::vector<std::string>& feature_names);
ScalerParams ParseScaler(std::string_view text);

}  // namespace epf

#endif  // EPF_FEATURE_IO_H_
