#include "epf/error.h"

#include <array>

namespace epf {

namespace {

constexpr std::array<std::string_view, 30> kNames = {
    "Io",
    "EmptyFile",
    "MalformedHeader",
    "MalformedRow",
    "MalformedTimestamp",
    "MissingTimestampColumn",
    "MissingCityColumn",
    "EmptyIntersection",
    "NotHourlyGrid",
    "AllMissingColumn",
    "TargetMissing",
    "KTooLarge",
    "ConstantColumn",
    "DimensionMismatch",
    "DegenerateSplit",
    "RankDeficient",
    "EmptyTrainingSet",
    "KExceedsN",
    "NonPositiveHyperparam",
    "ConvergenceFailure",
    "LengthMismatch",
    "DegenerateTarget",
    "KOutOfRange",
    "EmptyGrid",
    "DegenerateWeights",
    "ModelLoadFailure",
    "RowOutOfRange",
    "SchemaMismatch",
    "InvalidConfig",
    "InvalidArgument",
};

static_assert(kNames.size() ==
              static_cast<std::size_t>(ErrorCode::kInvalidArgument) + 1);

}  // namespace

std::string_view ErrorCodeName(ErrorCode code) {
  return kNames.at(static_cast<std::size_t>(code));
}

int ExitCodeFor(ErrorCode code) { return 10 + static_cast<int>(code); }

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

Error Error::WithContext(std::string_view context) const {
  return Error(code_, std::string(context) + ": " + what());
}

}  // namespace epf
