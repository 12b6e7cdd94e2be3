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

// cqgen: train an n-gram LM, generate clarifying questions, evaluate them.

#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "cqgen/error.h"
#include "cqgen/ngram.h"
#include "cqgen/pipeline.h"

namespace {

int train_lm(const std::string& corpus, int order, double add_k, const std::string& out) {
  std::ifstream in(corpus);
  if (!in) throw cqgen::InvalidInput("cannot open corpus: " + corpus);
  const cqgen::NGramModel model = cqgen::train_ngram(in, order, add_k);
  model.save(std::filesystem::path(out));
  std::cerr << "trained order-" << order << " model, " << model.vocab().size()
            << " vocab entries -> " << out << "\n";
  return 0;
}

int evaluate_cmd(const std::string& data, const std::string& generations, const std::string& mode,
                 const std::string& templates, const std::string& out) {
  const auto rows = cqgen::load_dataset(data);
  const auto records = cqgen::load_generations(generations);
  const cqgen::TemplateSet tset =
      templates.empty() ? cqgen::TemplateSet::builtin() : cqgen::TemplateSet::load(templates);
  std::vector<cqgen::EvalReport> reports;
  if (mode == "full" || mode == "both") {
    reports.push_back(cqgen::evaluate(rows, records, cqgen::EvalMode::kFull, tset));
  }
  if (mode == "body" || mode == "both") {
    reports.push_back(cqgen::evaluate(rows, records, cqgen::EvalMode::kBody, tset));
  }
  std::cout << cqgen::format_table(reports);
  if (!out.empty()) {
    std::ofstream f(out, std::ios::binary);
    f << cqgen::reports_json(reports);
    if (!f) throw cqgen::InvalidInput("cannot write " + out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zero-shot facet-constrained clarifying question generation"};
  app.require_subcommand(1);

  // train-lm
  auto* train = app.add_subcommand("train-lm", "Train an add-k smoothed word n-gram model");
  std::string corpus;
  std::string model_out;
  int order = 3;
  double add_k = 0.1;
  train->add_option("--corpus", corpus, "Training text, one sentence per line")->required();
  train->add_option("--order", order, "n-gram order")->capture_default_str();
  train->add_option("--add-k", add_k, "Add-k smoothing constant")->capture_default_str();
  train->add_option("--out", model_out, "Model file to write")->required();

  // generate: every flag is captured as text and applied through RunConfig::set,
  // so CLI values and config-file values share one parser.
  auto* gen = app.add_subcommand("generate", "Generate one clarifying question per dataset row");
  std::map<std::string, std::string> flags;
  const std::vector<std::pair<std::string, std::string>> generate_flags = {
      {"data", "TSV dataset (query, facet, question)"},
      {"lm", "ngram:<model file> or remote:<url> (default $CQGEN_LM_ENDPOINT)"},
      {"mode", "zsfc|template_0|q_gpt_0|qf_gpt_0|prompt_0|subject_constrained|template_facet"},
      {"ranker", "ppl|autoscore|wsdm|external"},
      {"beam", "Beam size k"},
      {"alpha", "Likelihood filter size (default 20k)"},
      {"beta", "Constraint filter size (default 20k)"},
      {"max-len", "Maximum generated tokens"},
      {"gamma", "Length normalization exponent"},
      {"block-unk", "Never generate <unk> (true|false)"},
      {"templates", "Template file, one per line"},
      {"out", "Output JSONL"},
      {"workers", "Worker threads"},
      {"wsdm-mu", "WSDM Dirichlet mu"},
      {"wsdm-window", "WSDM unordered window width"},
      {"wsdm-lambda-t", "WSDM unigram weight"},
      {"wsdm-lambda-o", "WSDM ordered-bigram weight"},
      {"wsdm-lambda-u", "WSDM unordered-bigram weight"},
      {"autoscore-weights", "BLEU-1,ROUGE-L,METEOR weights"},
      {"scorer", "External scorer URL (default $CQGEN_SCORER_ENDPOINT)"},
      {"scorer-concurrent", "Allow concurrent scorer requests"},
      {"fallback-wsdm", "Fall back to WSDM when the external scorer fails"},
      {"timeout", "Remote request timeout in seconds"},
      {"coverage", "containment|frequency"},
  };
  std::map<std::string, CLI::Option*> gen_opts;
  for (const auto& [name, help] : generate_flags) {
    gen_opts[name] = gen->add_option("--" + name, flags[name], help);
  }
  std::string config_path;
  gen->add_option("--config", config_path, "key=value config file (CLI flags win)");

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "Score generations against reference questions");
  std::string eval_data;
  std::string eval_generations;
  std::string eval_mode = "both";
  std::string eval_templates;
  std::string eval_out;
  eval->add_option("--data", eval_data, "TSV dataset")->required();
  eval->add_option("--generations", eval_generations, "JSONL from generate")->required();
  eval->add_option("--mode", eval_mode, "full|body|both")
      ->check(CLI::IsMember({"full", "body", "both"}))
      ->capture_default_str();
  eval->add_option("--templates", eval_templates, "Template file used for body mode");
  eval->add_option("--out", eval_out, "Report JSON to write");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) return train_lm(corpus, order, add_k, model_out);
    if (*eval) return evaluate_cmd(eval_data, eval_generations, eval_mode, eval_templates, eval_out);

    cqgen::Settings file_settings;
    if (!config_path.empty()) file_settings = cqgen::load_config_file(config_path);
    cqgen::Settings cli_settings;
    for (const auto& [name, help] : generate_flags) {
      if (gen_opts[name]->count() > 0) cli_settings.emplace_back(name, flags[name]);
    }
    const auto config = cqgen::RunConfig::from_layers(file_settings, cli_settings);
    const auto result = cqgen::run(config);
    std::cout << cqgen::format_table({result.full, result.body});
    std::cerr << result.rows << " rows, " << result.failed << " failed -> " << config.out_path
              << "\n";
    return result.failed == 0 ? 0 : 1;
  } catch (const cqgen::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
