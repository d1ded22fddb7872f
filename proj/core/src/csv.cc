#include "epf/csv.h"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "epf/error.h"

namespace epf {

namespace {

std::string_view TrimView(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

// Splits the whole document into records of fields.
struct RawRecord {
  std::vector<std::string> fields;
  std::size_t line;
};

std::vector<RawRecord> Tokenize(std::string_view text,
                                std::string_view source_name) {
  std::vector<RawRecord> records;
  RawRecord current{{}, 1};
  std::string field;
  bool in_quotes = false;
  bool record_has_content = false;
  std::size_t line = 1;

  auto end_field = [&] {
    current.fields.push_back(std::move(field));
    field.clear();
  };
  auto end_record = [&] {
    end_field();
    // Skip blank lines entirely.
    if (record_has_content) records.push_back(std::move(current));
    current = RawRecord{{}, line};
    record_has_content = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        record_has_content = true;
        break;
      case ',':
        end_field();
        record_has_content = true;
        break;
      case '\r':
        break;
      case '\n':
        ++line;
        end_record();
        break;
      default:
        field.push_back(c);
        record_has_content = true;
    }
  }
  if (in_quotes) {
    throw Error(ErrorCode::kMalformedRow,
                std::string(source_name) + ": unterminated quoted field");
  }
  if (record_has_content || !field.empty()) end_record();
  return records;
}

}  // namespace

CsvDocument ParseCsv(std::string_view text, std::string_view source_name) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  std::vector<RawRecord> records = Tokenize(text, source_name);
  if (records.empty()) {
    throw Error(ErrorCode::kEmptyFile,
                std::string(source_name) + ": file has no header row");
  }

  CsvDocument doc;
  std::unordered_set<std::string> seen;
  for (auto& name : records.front().fields) {
    std::string trimmed(TrimView(name));
    if (trimmed.empty()) {
      throw Error(ErrorCode::kMalformedHeader,
                  std::string(source_name) + ": empty column name in header");
    }
    if (!seen.insert(trimmed).second) {
      throw Error(ErrorCode::kMalformedHeader,
                  std::string(source_name) + ": duplicate column '" + trimmed +
                      "'");
    }
    doc.header.push_back(std::move(trimmed));
  }

  for (std::size_t r = 1; r < records.size(); ++r) {
    auto& rec = records[r];
    if (rec.fields.size() != doc.header.size()) {
      throw Error(ErrorCode::kMalformedRow,
                  std::string(source_name) + ":" + std::to_string(rec.line) +
                      ": expected " + std::to_string(doc.header.size()) +
                      " fields, found " + std::to_string(rec.fields.size()));
    }
    doc.rows.push_back(std::move(rec.fields));
    doc.line_numbers.push_back(rec.line);
  }
  return doc;
}

CsvDocument ReadCsv(const std::filesystem::path& path) {
  return ParseCsv(ReadTextFile(path), path.string());
}

std::optional<double> ParseNumber(std::string_view cell) {
  cell = TrimView(cell);
  if (cell.empty()) return std::nullopt;
  if (cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) return std::nullopt;
  if (!std::isfinite(value)) return std::nullopt;
  return value;
}

std::string FormatDouble(double value) {
  if (std::isnan(value)) return "NA";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

std::string CsvEscape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string JoinCsvRow(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) line.push_back(',');
    line += CsvEscape(fields[i]);
  }
  line.push_back('\n');
  return line;
}

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFileAtomic(const std::filesystem::path& path,
                     std::string_view content) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(ErrorCode::kIo, "cannot write '" + tmp.string() + "'");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
      throw Error(ErrorCode::kIo, "short write to '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw Error(ErrorCode::kIo, "cannot rename '" + tmp.string() + "' to '" +
                                    path.string() + "': " + ec.message());
  }
}

}  // namespace epf
