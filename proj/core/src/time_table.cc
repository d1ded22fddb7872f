#include "epf/time_table.h"

#include <chrono>
#include <cstdio>

#include "epf/error.h"

namespace epf {

namespace {

// Reads exactly `width` digits at `pos`, advancing it.
bool ReadDigits(std::string_view text, std::size_t& pos, std::size_t width,
                int& out) {
  if (pos + width > text.size()) return false;
  int value = 0;
  for (std::size_t i = 0; i < width; ++i) {
    const char c = text[pos + i];
    if (c < '0' || c > '9') return false;
    value = value * 10 + (c - '0');
  }
  out = value;
  pos += width;
  return true;
}

bool Expect(std::string_view text, std::size_t& pos, char c) {
  if (pos < text.size() && text[pos] == c) {
    ++pos;
    return true;
  }
  return false;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

}  // namespace

CivilTime ToCivil(Timestamp ts) {
  using namespace std::chrono;
  const sys_seconds tp{seconds{ts}};
  const sys_days day = floor<days>(tp);
  const year_month_day ymd{day};
  const hh_mm_ss<seconds> hms{tp - day};
  const weekday wd{day};
  return CivilTime{
      .year = static_cast<int>(ymd.year()),
      .month = static_cast<int>(static_cast<unsigned>(ymd.month())),
      .day = static_cast<int>(static_cast<unsigned>(ymd.day())),
      .hour = static_cast<int>(hms.hours().count()),
      .minute = static_cast<int>(hms.minutes().count()),
      .second = static_cast<int>(hms.seconds().count()),
      // iso_encoding: Monday = 1 ... Sunday = 7
      .day_of_week = static_cast<int>(wd.iso_encoding()) - 1,
  };
}

Timestamp FromCivil(int year, int month, int day, int hour, int minute,
                    int second) {
  using namespace std::chrono;
  const year_month_day ymd{std::chrono::year{year},
                           std::chrono::month{static_cast<unsigned>(month)},
                           std::chrono::day{static_cast<unsigned>(day)}};
  const sys_days d{ymd};
  return d.time_since_epoch().count() * 86400LL + hour * 3600LL +
         minute * 60LL + second;
}

std::optional<int> ParseUtcOffset(std::string_view text) {
  text = Trim(text);
  if (text == "Z" || text == "z") return 0;
  if (text.empty() || (text[0] != '+' && text[0] != '-')) return std::nullopt;
  const int sign = text[0] == '-' ? -1 : 1;
  std::size_t pos = 1;
  int hours = 0;
  int minutes = 0;
  if (!ReadDigits(text, pos, 2, hours)) return std::nullopt;
  if (pos < text.size()) {
    Expect(text, pos, ':');
    if (!ReadDigits(text, pos, 2, minutes)) return std::nullopt;
  }
  if (pos != text.size() || hours > 23 || minutes > 59) return std::nullopt;
  return sign * (hours * 60 + minutes);
}

std::optional<Timestamp> ParseIso8601(std::string_view text,
                                      int default_offset_minutes) {
  text = Trim(text);
  std::size_t pos = 0;
  int year, month, day, hour = 0, minute = 0, second = 0;
  if (!ReadDigits(text, pos, 4, year) || !Expect(text, pos, '-') ||
      !ReadDigits(text, pos, 2, month) || !Expect(text, pos, '-') ||
      !ReadDigits(text, pos, 2, day)) {
    return std::nullopt;
  }
  if (pos < text.size()) {
    if (text[pos] != 'T' && text[pos] != ' ') return std::nullopt;
    ++pos;
    if (!ReadDigits(text, pos, 2, hour) || !Expect(text, pos, ':') ||
        !ReadDigits(text, pos, 2, minute)) {
      return std::nullopt;
    }
    if (Expect(text, pos, ':')) {
      if (!ReadDigits(text, pos, 2, second)) return std::nullopt;
      if (Expect(text, pos, '.')) {
        // Fractional seconds are accepted and truncated.
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
      }
    }
  }
  int offset = default_offset_minutes;
  if (pos < text.size()) {
    const auto parsed = ParseUtcOffset(text.substr(pos));
    if (!parsed) return std::nullopt;
    offset = *parsed;
  }
  const std::chrono::year_month_day ymd{
      std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
      std::chrono::day{static_cast<unsigned>(day)}};
  if (!ymd.ok() || hour > 23 || minute > 59 || second > 60) return std::nullopt;
  return FromCivil(year, month, day, hour, minute, second) - offset * 60LL;
}

std::string FormatIso8601(Timestamp ts) {
  const CivilTime c = ToCivil(ts);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", c.year,
                c.month, c.day, c.hour, c.minute, c.second);
  return buf;
}

TimeTable::TimeTable(std::vector<Timestamp> timestamps,
                     std::vector<Column> columns)
    : timestamps_(std::move(timestamps)) {
  for (std::size_t i = 0; i < timestamps_.size(); ++i) {
    if (timestamps_[i] % kSecondsPerHour != 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "timestamp not on an hour boundary: " +
                      FormatIso8601(timestamps_[i]));
    }
    if (i > 0 && timestamps_[i] <= timestamps_[i - 1]) {
      throw Error(ErrorCode::kInvalidArgument,
                  "timestamps must be strictly increasing");
    }
  }
  for (auto& c : columns) AddColumn(std::move(c));
}

std::optional<std::size_t> TimeTable::FindColumn(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].name == name) return i;
  }
  return std::nullopt;
}

void TimeTable::AddColumn(Column column) {
  if (column.values.size() != timestamps_.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "column '" + column.name + "' has " +
                    std::to_string(column.values.size()) + " values for " +
                    std::to_string(timestamps_.size()) + " timestamps");
  }
  if (FindColumn(column.name)) {
    throw Error(ErrorCode::kMalformedHeader,
                "duplicate column name '" + column.name + "'");
  }
  columns_.push_back(std::move(column));
}

bool TimeTable::IsHourlyGrid() const {
  for (std::size_t i = 1; i < timestamps_.size(); ++i) {
    if (timestamps_[i] - timestamps_[i - 1] != kSecondsPerHour) return false;
  }
  return true;
}

std::size_t TimeTable::CountMissing() const {
  std::size_t missing = 0;
  for (const auto& c : columns_) {
    for (double v : c.values) missing += IsMissing(v) ? 1 : 0;
  }
  return missing;
}

}  // namespace epf
