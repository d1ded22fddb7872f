#ifndef EPF_TIME_TABLE_H_
#define EPF_TIME_TABLE_H_

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace epf {

// Seconds since 1970-01-01T00:00:00Z.
using Timestamp = std::int64_t;

inline constexpr Timestamp kSecondsPerHour = 3600;

// Missing cells are stored as quiet NaN; no other NaN ever enters a table.
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
inline bool IsMissing(double v) { return std::isnan(v); }

struct CivilTime {
  int year;
  int month;         // 1-12
  int day;           // 1-31
  int hour;          // 0-23
  int minute;
  int second;
  int day_of_week;   // 0-6, Monday = 0
};

CivilTime ToCivil(Timestamp ts);
Timestamp FromCivil(int year, int month, int day, int hour, int minute,
                    int second);

// Accepts "YYYY-MM-DD[T| ]HH:MM[:SS[.fff]]" optionally followed by "Z",
// "+HH:MM", "+HHMM" or "+HH". Without an offset the text is read as local time
// at `default_offset_minutes` east of UTC. Returns nullopt when unparseable.
std::optional<Timestamp> ParseIso8601(std::string_view text,
                                      int default_offset_minutes = 0);

// Parses a fixed offset such as "+01:00", "-0530" or "Z"; nullopt if invalid.
std::optional<int> ParseUtcOffset(std::string_view text);

// "2015-01-01T00:00:00Z".
std::string FormatIso8601(Timestamp ts);

struct Column {
  std::string name;
  // "energy", "weather:<city>" or "derived".
  std::string provenance;
  std::vector<double> values;
};

// Timestamp-indexed columnar table of hourly records.
// Timestamps are strictly increasing multiples of one hour; every column has
// one value per timestamp.
class TimeTable {
 public:
  TimeTable() = default;
  // Throws Error(kInvalidArgument) if the invariants do not hold.
  TimeTable(std::vector<Timestamp> timestamps, std::vector<Column> columns);

  const std::vector<Timestamp>& timestamps() const { return timestamps_; }
  const std::vector<Column>& columns() const { return columns_; }
  std::size_t rows() const { return timestamps_.size(); }
  std::size_t column_count() const { return columns_.size(); }

  // Index of the column called `name`, or nullopt.
  std::optional<std::size_t> FindColumn(std::string_view name) const;
  const Column& column(std::size_t i) const { return columns_.at(i); }

  // Appends a column; throws on a length mismatch or duplicate name.
  void AddColumn(Column column);

  // True when consecutive timestamps are exactly one hour apart.
  bool IsHourlyGrid() const;

  std::size_t CountMissing() const;

 private:
  std::vector<Timestamp> timestamps_;
  std::vector<Column> columns_;
};

}  // namespace epf

#endif  // EPF_TIME_TABLE_H_
