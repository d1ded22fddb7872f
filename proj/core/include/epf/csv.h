#ifndef EPF_CSV_H_
#define EPF_CSV_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace epf {

struct CsvDocument {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  // 1-based source line of each row, for error messages.
  std::vector<std::size_t> line_numbers;
};

// RFC 4180 style: comma separated, double-quoted fields may contain commas,
// newlines and doubled quotes. A UTF-8 BOM is skipped. Header names are
// trimmed of surrounding whitespace. Throws kEmptyFile when there is no header,
// kMalformedHeader on empty or duplicate names and kMalformedRow on a row
// whose field count differs from the header.
CsvDocument ParseCsv(std::string_view text, std::string_view source_name);
CsvDocument ReadCsv(const std::filesystem::path& path);

// Parses a numeric cell. Empty, "nan", "NA" or otherwise unparseable text and
// non-finite values yield nullopt.
std::optional<double> ParseNumber(std::string_view cell);

// Shortest text that parses back to the identical double; NaN becomes "NA".
std::string FormatDouble(double value);

// Quotes a field when it contains a comma, quote or newline.
std::string CsvEscape(std::string_view field);

std::string JoinCsvRow(const std::vector<std::string>& fields);

std::string ReadTextFile(const std::filesystem::path& path);

// Writes `<path>.tmp` then renames it over `path`, so readers never observe a
// partially written file. Parent directories are created as needed.
void WriteFileAtomic(const std::filesystem::path& path,
                     std::string_view content);

}  // namespace epf

#endif  // EPF_CSV_H_
