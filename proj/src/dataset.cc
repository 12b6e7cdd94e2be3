// Copyright 2026 The cqgen Authors
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

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include "cqgen/error.h"
#include "cqgen/pipeline.h"
#include "cqgen/text.h"

namespace cqgen {

namespace {

enum Column { kQuery = 0, kFacet = 1, kQuestion = 2 };

std::optional<Column> column_for(const std::string& header_cell) {
  const std::string name = to_lower(trim(header_cell));
  if (name == "query" || name == "initial_request" || name == "q") return kQuery;
  if (name == "facet" || name == "facet_desc" || name == "facet_words" || name == "f") return kFacet;
  if (name == "question" || name == "clarifying_question" || name == "reference" ||
      name == "reference_question" || name == "cq") {
    return kQuestion;
  }
  return std::nullopt;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    cells.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return cells;
}

}  // namespace

std::vector<DatasetRow> parse_dataset(std::istream& in) {
  std::vector<DatasetRow> rows;
  std::array<std::size_t, 3> cell_of = {0, 1, 2};  // column -> cell index
  std::size_t line_no = 0;
  bool first = true;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto cells = split_tabs(line);
    if (cells.size() != 3) {
      throw DatasetParseError(line_no, "expected 3 tab-separated columns, found " +
                                           std::to_string(cells.size()));
    }
    if (first) {
      first = false;
      std::array<std::optional<Column>, 3> cols;
      for (std::size_t i = 0; i < 3; ++i) cols[i] = column_for(cells[i]);
      const bool all_named = std::all_of(cols.begin(), cols.end(), [](auto c) { return c.has_value(); });
      if (all_named && *cols[0] != *cols[1] && *cols[1] != *cols[2] && *cols[0] != *cols[2]) {
        for (std::size_t i = 0; i < 3; ++i) cell_of[*cols[i]] = i;
        continue;
      }
    }
    DatasetRow row{trim(cells[cell_of[kQuery]]), trim(cells[cell_of[kFacet]]),
                   trim(cells[cell_of[kQuestion]])};
    if (row.query.empty() || row.facet.empty() || row.reference_question.empty()) {
      throw DatasetParseError(line_no, "empty field");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<DatasetRow> load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DatasetFileError("cannot open dataset: " + path.string());
  return parse_dataset(in);
}

}  // namespace cqgen
