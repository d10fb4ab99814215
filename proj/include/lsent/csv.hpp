// Copyright 2026 The lsent Authors. All Rights Reserved.
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

#pragma once

// Minimal CSV dialect: comma separator, double-quote escaping ("" inside a
// quoted field), UTF-8, mandatory header row. Quoted fields may span lines.

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lsent/error.hpp"

namespace lsent::csv {

struct Row {
  std::vector<std::string> fields;
  std::size_t line = 0;  // 1-based line on which the record starts
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  /// Reads the next record; std::nullopt at end of input.
  std::optional<Row> next() {
    Row row;
    std::string field;
    bool quoted = false;
    bool field_started = false;
    bool any = false;
    row.line = line_;
    char c;
    while (in_.get(c)) {
      any = true;
      if (quoted) {
        if (c == '"') {
          if (in_.peek() == '"') {
            in_.get(c);
            field.push_back('"');
          } else {
            quoted = false;
          }
        } else {
          if (c == '\n') ++line_;
          field.push_back(c);
        }
        continue;
      }
      if (c == '"') {
        if (field_started && !field.empty()) {
          throw DataError("csv line " + std::to_string(line_) + ": stray quote inside unquoted field");
        }
        quoted = true;
        field_started = true;
      } else if (c == ',') {
        row.fields.push_back(std::move(field));
        field.clear();
        field_started = false;
      } else if (c == '\n') {
        ++line_;
        if (!field.empty() && field.back() == '\r') field.pop_back();
        row.fields.push_back(std::move(field));
        return row;
      } else {
        field.push_back(c);
        field_started = true;
      }
    }
    if (quoted) throw DataError("csv line " + std::to_string(row.line) + ": unterminated quoted field");
    if (!any) return std::nullopt;
    if (!field.empty() && field.back() == '\r') field.pop_back();
    row.fields.push_back(std::move(field));
    return row;
  }

 private:
  std::istream& in_;
  std::size_t line_ = 1;
};

/// A CSV table addressed by header name.
struct Table {
  std::vector<std::string> header;
  std::vector<Row> rows;

  std::optional<std::size_t> column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    return std::nullopt;
  }
};

inline Table read_table(std::istream& in) {
  Reader reader(in);
  Table table;
  auto header = reader.next();
  if (!header) throw DataError("csv: missing header row");
  table.header = std::move(header->fields);
  if (!table.header.empty() && table.header[0].starts_with("\xEF\xBB\xBF")) {
    table.header[0].erase(0, 3);
  }
  while (auto row = reader.next()) {
    if (row->fields.size() == 1 && row->fields[0].empty()) continue;  // blank line
    if (row->fields.size() != table.header.size()) {
      throw DataError("csv line " + std::to_string(row->line) + ": expected " +
                      std::to_string(table.header.size()) + " fields, got " +
                      std::to_string(row->fields.size()));
    }
    table.rows.push_back(std::move(*row));
  }
  return table;
}

inline std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

inline void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << escape(fields[i]);
  }
  out << '\n';
}

}  // namespace lsent::csv
