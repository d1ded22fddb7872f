#ifndef EPF_ERROR_H_
#define EPF_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace epf {

// Every failure the library reports carries one of these codes. The CLI maps
// each code to a distinct process exit status (see ExitCodeFor).
enum class ErrorCode {
  kIo = 0,
  kEmptyFile,
  kMalformedHeader,
  kMalformedRow,
  kMalformedTimestamp,
  kMissingTimestampColumn,
  kMissingCityColumn,
  kEmptyIntersection,
  kNotHourlyGrid,
  kAllMissingColumn,
  kTargetMissing,
  kKTooLarge,
  kConstantColumn,
  kDimensionMismatch,
  kDegenerateSplit,
  kRankDeficient,
  kEmptyTrainingSet,
  kKExceedsN,
  kNonPositiveHyperparam,
  kConvergenceFailure,
  kLengthMismatch,
  kDegenerateTarget,
  kKOutOfRange,
  kEmptyGrid,
  kDegenerateWeights,
  kModelLoadFailure,
  kRowOutOfRange,
  kSchemaMismatch,
  kInvalidConfig,
  kInvalidArgument,
};

// Stable CamelCase name, e.g. "AllMissingColumn".
std::string_view ErrorCodeName(ErrorCode code);

// Process exit status for a code: 10 + enumerator value.
int ExitCodeFor(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

  // Same code, message prefixed with `context: `.
  Error WithContext(std::string_view context) const;

 private:
  ErrorCode code_;
};

}  // namespace epf

#endif  // EPF_ERROR_H_
