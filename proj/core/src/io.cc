// Copyright 2026 The Metablock Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "metablock/io.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>

#include "metablock/error.h"

namespace metablock {
namespace {

std::string Where(std::string_view origin, std::size_t line) {
  return std::string(origin) + ":" + std::to_string(line) + ": ";
}

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char &c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

// Blank lines come back from the reader as one empty field.
bool IsBlank(const std::vector<std::string> &fields) {
  return fields.size() == 1 && fields[0].empty();
}

void AddProfile(Dataset &ds, std::string key, std::vector<Attribute> attributes,
                std::string_view origin, std::size_t line) {
  if (key.empty()) throw DataError(Where(origin, line) + "empty record key");
  const auto id = static_cast<EntityId>(ds.profiles.size());
  if (!ds.key_index.emplace(key, id).second) {
    throw DataError(Where(origin, line) + "duplicate record key '" + key + "'");
  }
  ds.profiles.push_back({id, ds.source, std::move(attributes)});
  ds.keys.push_back(std::move(key));
}

Dataset IngestCsv(std::istream &in, Source source, const IngestOptions &options,
                  std::string_view origin) {
  CsvReader reader(in, options.separator);
  std::vector<std::string> header;
  do {
    if (!reader.ReadRow(header))
      throw DataError(std::string(origin) + ": empty input");
  } while (IsBlank(header));
  if (!header.empty() && header[0].rfind("\xEF\xBB\xBF", 0) == 0) {
    header[0].erase(0, 3);  // UTF-8 byte order mark
  }

  std::size_t key_col = 0;
  if (!options.key_column.empty()) {
    const auto it = std::find(header.begin(), header.end(), options.key_column);
    if (it == header.end()) {
      throw DataError(std::string(origin) + ": no key column '" +
                      options.key_column + "'");
    }
    key_col = static_cast<std::size_t>(it - header.begin());
  }

  Dataset ds;
  ds.source = source;
  std::vector<std::string> row;
  while (reader.ReadRow(row)) {
    if (IsBlank(row)) continue;
    if (row.size() != header.size()) {
      throw DataError(Where(origin, reader.line()) + "expected " +
                      std::to_string(header.size()) + " fields, found " +
                      std::to_string(row.size()));
    }
    std::vector<Attribute> attributes;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c == key_col || row[c].empty()) continue;
      attributes.push_back({header[c], std::move(row[c])});
    }
    AddProfile(ds, std::move(row[key_col]), std::move(attributes), origin,
               reader.line());
  }
  return ds;
}

std::string JsonText(const nlohmann::json &value) {
  return value.is_string() ? value.get<std::string>() : value.dump();
}

Dataset IngestJsonLines(std::istream &in, Source source,
                        const IngestOptions &options, std::string_view origin) {
  const std::string key_field =
      options.key_column.empty() ? "id" : options.key_column;
  Dataset ds;
  ds.source = source;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error &e) {
      throw DataError(Where(origin, number) + e.what());
    }
    if (!record.is_object()) {
      throw DataError(Where(origin, number) + "record is not a JSON object");
    }
    const auto key = record.find(key_field);
    if (key == record.end() || key->is_null()) {
      throw DataError(Where(origin, number) + "missing key field '" +
                      key_field + "'");
    }
    std::vector<Attribute> attributes;
    for (const auto &[name, value] : record.items()) {
      if (name == key_field || value.is_null()) continue;
      std::string text = JsonText(value);
      if (!text.empty()) attributes.push_back({name, std::move(text)});
    }
    AddProfile(ds, JsonText(*key), std::move(attributes), origin, number);
  }
  return ds;
}

std::ifstream OpenInput(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

}  // namespace

bool CsvReader::ReadRow(std::vector<std::string> &fields) {
  fields.clear();
  if (in_.peek() == std::char_traits<char>::eof()) return false;
  record_line_ = next_line_;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (;;) {
    const int c = in_.get();
    if (c == std::char_traits<char>::eof()) {
      if (quoted) {
        throw DataError("line " + std::to_string(record_line_) +
                        ": unterminated quoted field");
      }
      break;
    }
    const char ch = static_cast<char>(c);
    if (quoted) {
      if (ch == '"') {
        if (in_.peek() == '"') {
          in_.get();
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        if (ch == '\n') ++next_line_;
        field.push_back(ch);
      }
      continue;
    }
    if (ch == '"' && field.empty() && !was_quoted) {
      quoted = was_quoted = true;
    } else if (ch == separator_) {
      fields.push_back(std::move(field));
      field.clear();
      was_quoted = false;
    } else if (ch == '\n') {
      ++next_line_;
      break;
    } else if (ch == '\r' && in_.peek() == '\n') {
      // CRLF; the newline ends the record on the next pass.
    } else {
      field.push_back(ch);
    }
  }
  fields.push_back(std::move(field));
  return true;
}

std::string CsvEscape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
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

void WriteCsvRow(std::ostream &out, std::span<const std::string> fields) {
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (k > 0) out << ',';
    out << CsvEscape(fields[k]);
  }
  out << '\n';
}

void WriteCsvRow(std::ostream &out,
                 std::initializer_list<std::string_view> fields) {
  bool first = true;
  for (std::string_view f : fields) {
    if (!first) out << ',';
    out << CsvEscape(f);
    first = false;
  }
  out << '\n';
}

std::optional<InputFormat> ParseInputFormat(std::string_view name) {
  const std::string key = Lower(name);
  if (key == "csv") return InputFormat::kCsv;
  if (key == "jsonl" || key == "json" || key == "ndjson") {
    return InputFormat::kJsonLines;
  }
  return std::nullopt;
}

InputFormat GuessInputFormat(const std::filesystem::path &path) {
  const std::string ext = Lower(path.extension().string());
  if (ext == ".jsonl" || ext == ".ndjson" || ext == ".json") {
    return InputFormat::kJsonLines;
  }
  return InputFormat::kCsv;
}

Dataset Ingest(std::istream &in, Source source, const IngestOptions &options,
               std::string_view origin) {
  return options.format == InputFormat::kCsv
             ? IngestCsv(in, source, options, origin)
             : IngestJsonLines(in, source, options, origin);
}

Dataset Ingest(const std::filesystem::path &path, Source source,
               const IngestOptions &options) {
  std::ifstream in = OpenInput(path);
  return Ingest(in, source, options, path.string());
}

GroundTruth LoadGroundTruth(std::istream &in, const Dataset &first,
                            const Dataset *second, std::string_view origin) {
  const bool clean = second != nullptr;
  const Dataset &other = clean ? *second : first;
  const auto offset = clean ? static_cast<EntityId>(first.size()) : 0;
  GroundTruth gt(clean ? ErMode::kCleanClean : ErMode::kDirty,
                 static_cast<EntityId>(first.size()));

  CsvReader reader(in);
  std::vector<std::string> row;
  bool first_row = true;
  while (reader.ReadRow(row)) {
    if (IsBlank(row)) continue;
    if (row.size() < 2) {
      throw DataError(Where(origin, reader.line()) +
                      "ground truth rows need two keys");
    }
    const auto a = first.key_index.find(row[0]);
    const auto b = other.key_index.find(row[1]);
    const bool found_a = a != first.key_index.end();
    const bool found_b = b != other.key_index.end();
    if (first_row && !found_a && !found_b) {
      first_row = false;  // header
      continue;
    }
    first_row = false;
    if (!found_a || !found_b) {
      throw DataError(Where(origin, reader.line()) + "unknown record key '" +
                      (found_a ? row[1] : row[0]) + "'");
    }
    try {
      gt.Add(a->second, b->second + offset);
    } catch (const Error &e) {
      throw DataError(Where(origin, reader.line()) + e.what());
    }
  }
  return gt;
}

GroundTruth LoadGroundTruth(const std::filesystem::path &path,
                            const Dataset &first, const Dataset *second) {
  std::ifstream in = OpenInput(path);
  return LoadGroundTruth(in, first, second, path.string());
}

}  // namespace metablock
