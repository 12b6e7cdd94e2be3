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

#include <cmath>
#include <fstream>
#include <limits>

#include "cqgen/error.h"
#include "cqgen/pipeline.h"
#include "cqgen/text.h"

namespace cqgen {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json to_json(const GenerationRecord& r) {
  ordered_json j;
  j["row_id"] = r.row_id;
  j["mode"] = std::string(to_string(r.mode));
  j["templates"] = r.templates;
  j["candidates"] = r.candidates;
  j["ranker"] = r.ranker;
  // JSON has no infinities; an impossible candidate (-inf) is written as null.
  ordered_json scores = ordered_json::array();
  for (double v : r.scores) {
    if (std::isfinite(v)) {
      scores.push_back(v);
    } else {
      scores.push_back(nullptr);
    }
  }
  j["scores"] = std::move(scores);
  j["selected"] = r.selected;
  if (r.error) j["error"] = *r.error;
  return j;
}

GenerationRecord record_from_json(const json& j) {
  try {
    GenerationRecord r;
    r.row_id = j.at("row_id").get<std::size_t>();
    r.mode = parse_generation_mode(j.at("mode").get<std::string>());
    r.templates = j.at("templates").get<std::vector<std::string>>();
    r.candidates = j.at("candidates").get<std::vector<std::string>>();
    r.ranker = j.at("ranker").get<std::string>();
    for (const auto& v : j.at("scores")) {
      r.scores.push_back(v.is_null() ? -std::numeric_limits<double>::infinity() : v.get<double>());
    }
    r.selected = j.at("selected").get<std::string>();
    if (j.contains("error")) r.error = j.at("error").get<std::string>();
    return r;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed generation record: ") + e.what());
  }
}

std::string serialize_record(const GenerationRecord& record) { return to_json(record).dump(); }

GenerationRecord parse_record(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("generation line is not JSON: ") + e.what());
  }
  return record_from_json(j);
}

std::vector<GenerationRecord> load_generations(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open generations: " + path.string());
  std::vector<GenerationRecord> out;
  for (std::string line; std::getline(in, line);) {
    if (trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw InvalidInput(std::string("generation line is not JSON: ") + e.what());
    }
    if (j.contains("run_header")) continue;
    out.push_back(record_from_json(j));
  }
  return out;
}

}  // namespace cqgen
