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
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <thread>

#include "cqgen/error.h"
#include "cqgen/ngram.h"
#include "cqgen/pipeline.h"
#include "cqgen/remote.h"
#include "cqgen/text.h"

namespace cqgen {

using nlohmann::ordered_json;

namespace {

std::string format_real(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_real(const std::string& key, const std::string& value) {
  double v = 0.0;
  const std::string s = trim(value);
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw InvalidInput(key + ": not a number: " + value);
  }
  return v;
}

int parse_int(const std::string& key, const std::string& value) {
  int v = 0;
  const std::string s = trim(value);
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw InvalidInput(key + ": not an integer: " + value);
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  const std::string s = to_lower(trim(value));
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  throw InvalidInput(key + ": not a boolean: " + value);
}

bool has_key(const Settings& s, const std::string& key) {
  return std::any_of(s.begin(), s.end(), [&](const auto& kv) { return kv.first == key; });
}

ordered_json settings_json(const Settings& s) {
  ordered_json j = ordered_json::object();
  for (const auto& [k, v] : s) {
    if (k != "workers") j[k] = v;  // worker count never changes output bytes
  }
  return j;
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
  if (key == "data") {
    data_path = value;
  } else if (key == "lm") {
    lm_spec = value;
  } else if (key == "mode") {
    mode = parse_generation_mode(trim(value));
  } else if (key == "ranker") {
    ranker.kind = parse_ranker_kind(trim(value));
  } else if (key == "beam") {
    decode.beam_k = parse_int(key, value);
  } else if (key == "alpha") {
    decode.alpha = parse_int(key, value);
  } else if (key == "beta") {
    decode.beta = parse_int(key, value);
  } else if (key == "max-len") {
    decode.max_len = parse_int(key, value);
  } else if (key == "gamma") {
    decode.length_norm_gamma = parse_real(key, value);
  } else if (key == "block-unk") {
    decode.block_unk = parse_bool(key, value);
  } else if (key == "templates") {
    templates_path = value;
  } else if (key == "out") {
    out_path = value;
  } else if (key == "workers") {
    workers = parse_int(key, value);
  } else if (key == "wsdm-mu") {
    ranker.wsdm.mu = parse_real(key, value);
  } else if (key == "wsdm-window") {
    ranker.wsdm.window = parse_int(key, value);
  } else if (key == "wsdm-lambda-t") {
    ranker.wsdm.lambda_t = parse_real(key, value);
  } else if (key == "wsdm-lambda-o") {
    ranker.wsdm.lambda_o = parse_real(key, value);
  } else if (key == "wsdm-lambda-u") {
    ranker.wsdm.lambda_u = parse_real(key, value);
  } else if (key == "autoscore-weights") {
    std::vector<double> w;
    std::size_t start = 0;
    while (start <= value.size()) {
      const auto comma = value.find(',', start);
      w.push_back(parse_real(key, value.substr(start, comma == std::string::npos
                                                           ? std::string::npos
                                                           : comma - start)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (w.size() != 3) throw InvalidInput("autoscore-weights needs three comma-separated reals");
    ranker.autoscore = {w[0], w[1], w[2]};
  } else if (key == "scorer") {
    ranker.scorer_endpoint = value;
  } else if (key == "scorer-concurrent") {
    ranker.scorer_concurrent = parse_bool(key, value);
  } else if (key == "fallback-wsdm") {
    ranker.fallback_to_wsdm = parse_bool(key, value);
  } else if (key == "timeout") {
    ranker.timeout_s = parse_real(key, value);
  } else if (key == "coverage") {
    const std::string v = trim(value);
    if (v == "containment") {
      coverage_mode = CoverageMode::kContainment;
    } else if (v == "frequency") {
      coverage_mode = CoverageMode::kTokenFrequency;
    } else {
      throw InvalidInput("coverage must be containment or frequency");
    }
  } else {
    throw InvalidInput("unknown setting: " + key);
  }
}

std::map<std::string, std::string> RunConfig::settings() const {
  const auto& w = ranker.autoscore;
  return {
      {"data", data_path},
      {"lm", lm_spec},
      {"mode", std::string(to_string(mode))},
      {"ranker", std::string(to_string(ranker.kind))},
      {"beam", std::to_string(decode.beam_k)},
      {"alpha", std::to_string(decode.alpha)},
      {"beta", std::to_string(decode.beta)},
      {"max-len", std::to_string(decode.max_len)},
      {"gamma", format_real(decode.length_norm_gamma)},
      {"block-unk", decode.block_unk ? "true" : "false"},
      {"templates", templates_path},
      {"out", out_path},
      {"wsdm-mu", format_real(ranker.wsdm.mu)},
      {"wsdm-window", std::to_string(ranker.wsdm.window)},
      {"wsdm-lambda-t", format_real(ranker.wsdm.lambda_t)},
      {"wsdm-lambda-o", format_real(ranker.wsdm.lambda_o)},
      {"wsdm-lambda-u", format_real(ranker.wsdm.lambda_u)},
      {"autoscore-weights",
       format_real(w.bleu1) + "," + format_real(w.rouge_l) + "," + format_real(w.meteor)},
      {"scorer", ranker.scorer_endpoint},
      {"scorer-concurrent", ranker.scorer_concurrent ? "true" : "false"},
      {"fallback-wsdm", ranker.fallback_to_wsdm ? "true" : "false"},
      {"timeout", format_real(ranker.timeout_s)},
      {"coverage", coverage_mode == CoverageMode::kContainment ? "containment" : "frequency"},
  };
}

void RunConfig::validate() const {
  if (data_path.empty()) throw InvalidInput("no dataset given (--data)");
  if (lm_spec.empty()) throw InvalidInput("no language model given (--lm or $CQGEN_LM_ENDPOINT)");
  if (out_path.empty()) throw InvalidInput("no output path given (--out)");
  if (workers < 1) throw InvalidInput("workers must be >= 1");
  decode.validate();
  ranker.wsdm.validate();
  ranker.autoscore.validate();
  if (!(ranker.timeout_s > 0)) throw InvalidInput("timeout must be > 0");
  if (ranker.kind == RankerKind::kExternal && ranker.scorer_endpoint.empty()) {
    throw InvalidInput("external ranker needs --scorer or $CQGEN_SCORER_ENDPOINT");
  }
}

RunConfig RunConfig::from_layers(const Settings& file_settings, const Settings& cli_settings) {
  RunConfig c;
  for (const auto& [k, v] : file_settings) c.set(k, v);
  for (const auto& [k, v] : cli_settings) c.set(k, v);
  const bool alpha_set = has_key(file_settings, "alpha") || has_key(cli_settings, "alpha");
  const bool beta_set = has_key(file_settings, "beta") || has_key(cli_settings, "beta");
  if (!alpha_set) c.decode.alpha = 20 * c.decode.beam_k;
  if (!beta_set) c.decode.beta = 20 * c.decode.beam_k;
  if (c.lm_spec.empty()) {
    if (const char* env = std::getenv(kLmEndpointEnv); env != nullptr && *env != '\0') {
      c.lm_spec = std::string("remote:") + env;
    }
  }
  if (c.ranker.scorer_endpoint.empty()) {
    if (const char* env = std::getenv(kScorerEndpointEnv); env != nullptr && *env != '\0') {
      c.ranker.scorer_endpoint = env;
    }
  }
  c.file_settings = file_settings;
  c.cli_settings = cli_settings;
  return c;
}

Settings load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file: " + path.string());
  Settings out;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidInput(path.string() + ":" + std::to_string(line_no) + ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    out.emplace_back(key, trim(line.substr(eq + 1)));
  }
  return out;
}

LanguageModelHandle load_language_model(const std::string& spec, double timeout_s) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw InvalidInput("LM spec must be ngram:<path> or remote:<url>");
  const std::string kind = spec.substr(0, colon);
  const std::string arg = spec.substr(colon + 1);
  if (kind == "ngram") return std::make_shared<NGramModel>(NGramModel::load(arg));
  if (kind == "remote") return std::make_shared<RemoteModel>(Endpoint::parse(arg), timeout_s);
  throw InvalidInput("unknown LM provider: " + kind);
}

RunResult run(const RunConfig& config) {
  config.validate();
  const auto rows = load_dataset(config.data_path);
  const LanguageModelHandle lm = load_language_model(config.lm_spec, config.ranker.timeout_s);
  GenerationConfig gen;
  if (!config.templates_path.empty()) gen.templates = TemplateSet::load(config.templates_path);
  gen.decode = config.decode;
  const Ranker ranker(config.ranker);

  std::vector<GenerationRecord> records(rows.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      try {
        records[i] = generate_for_row(i, rows[i], config.mode, *lm, ranker, gen);
      } catch (const std::exception& e) {
        GenerationRecord failed;
        failed.row_id = i;
        failed.mode = config.mode;
        failed.ranker = ranker.name();
        failed.error = e.what();
        records[i] = std::move(failed);
      }
    }
  };
  const auto n_workers = static_cast<std::size_t>(
      std::max(1, std::min<int>(config.workers, static_cast<int>(std::max<std::size_t>(rows.size(), 1)))));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < n_workers; ++w) pool.emplace_back(worker);
    worker();
  }

  RunResult result;
  result.rows = rows.size();
  for (const auto& r : records) result.failed += r.error ? 1 : 0;

  {
    std::ofstream out(config.out_path, std::ios::binary);
    if (!out) throw InvalidInput("cannot write " + config.out_path);
    ordered_json header;
    header["tool"] = "cqgen";
    header["format"] = 1;
    ordered_json defaults = ordered_json::object();
    for (const auto& [k, v] : RunConfig{}.settings()) defaults[k] = v;
    header["defaults"] = std::move(defaults);
    header["config_file"] = settings_json(config.file_settings);
    header["cli"] = settings_json(config.cli_settings);
    ordered_json effective = ordered_json::object();
    for (const auto& [k, v] : config.settings()) effective[k] = v;
    header["effective"] = std::move(effective);
    out << ordered_json{{"run_header", header}}.dump() << '\n';
    for (const auto& r : records) out << serialize_record(r) << '\n';
  }

  result.full = evaluate(rows, records, EvalMode::kFull, gen.templates, config.coverage_mode);
  result.body = evaluate(rows, records, EvalMode::kBody, gen.templates, config.coverage_mode);
  {
    std::ofstream json_out(config.out_path + ".report.json", std::ios::binary);
    json_out << reports_json({result.full, result.body});
    std::ofstream text_out(config.out_path + ".report.txt", std::ios::binary);
    text_out << format_table({result.full, result.body});
    if (!json_out || !text_out) throw InvalidInput("cannot write reports next to " + config.out_path);
  }
  return result;
}

}  // namespace cqgen
