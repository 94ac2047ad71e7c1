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

#ifndef METABLOCK_IO_H_
#define METABLOCK_IO_H_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "metablock/types.h"

namespace metablock {

// RFC 4180 style reader: quoted fields may contain separators, doubled
// quotes and line breaks. Accepts LF and CRLF line endings.
class CsvReader {
 public:
  explicit CsvReader(std::istream &in, char separator = ',')
      : in_(in), separator_(separator) {}

  // Reads the next record into `fields`. Returns false at end of input.
  // Throws a data error on an unterminated quoted field.
  bool ReadRow(std::vector<std::string> &fields);

  // 1-based line number where the last returned record started.
  std::size_t line() const { return record_line_; }

 private:
  std::istream &in_;
  char separator_;
  std::size_t next_line_ = 1;
  std::size_t record_line_ = 0;
};

// Quotes a field when it contains a separator, quote or line break.
std::string CsvEscape(std::string_view field);
void WriteCsvRow(std::ostream &out, std::span<const std::string> fields);
void WriteCsvRow(std::ostream &out,
                 std::initializer_list<std::string_view> fields);

enum class InputFormat { kCsv, kJsonLines };

std::optional<InputFormat> ParseInputFormat(std::string_view name);
// By extension: .jsonl/.ndjson/.json are JSON lines, anything else CSV.
InputFormat GuessInputFormat(const std::filesystem::path &path);

// Profiles of one source together with their original record keys.
struct Dataset {
  Source source = Source::kDirty;
  std::vector<EntityProfile> profiles;
  std::vector<std::string> keys;  // keys[k] belongs to profiles[k]
  std::unordered_map<std::string, EntityId> key_index;

  std::size_t size() const { return profiles.size(); }
};

struct IngestOptions {
  InputFormat format = InputFormat::kCsv;
  // Column (CSV) or field (JSON lines) holding the record key. Empty selects
  // the first CSV column, or "id" for JSON lines.
  std::string key_column;
  char separator = ',';
};

// Every column except the key becomes an attribute; empty values and JSON
// nulls are skipped. Duplicate keys, a missing key column and malformed rows
// are data errors.
Dataset Ingest(std::istream &in, Source source, const IngestOptions &options,
               std::string_view origin = "<stream>");
Dataset Ingest(const std::filesystem::path &path, Source source,
               const IngestOptions &options);

// Two-column CSV of record keys: (key_e1, key_e2) in Clean-Clean ER, or
// (key_a, key_b) within `first` in Dirty ER (`second` null). A header row
// is recognised when its keys resolve to no entity. Unknown keys are data
// errors.
GroundTruth LoadGroundTruth(std::istream &in, const Dataset &first,
                            const Dataset *second,
                            std::string_view origin = "<stream>");
GroundTruth LoadGroundTruth(const std::filesystem::path &path,
                            const Dataset &first, const Dataset *second);

}  // namespace metablock

#endif  // METABLOCK_IO_H_
