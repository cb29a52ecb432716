// Copyright 2026 The otsum Authors
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

// otsum command line: summarize JSONL corpora by optimal transport over
// token embeddings, score candidate summaries against references, and
// export transport-plan explanations.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "otsum/error.hpp"
#include "otsum/pipeline.hpp"
#include "otsum/version.hpp"

namespace {

// All documents succeeded.
constexpr int kExitOk = 0;
// At least one per-document error, or the run could not start at all.
constexpr int kExitFailures = 2;

struct ConfigFlags {
  otsum::RunConfig defaults;
  std::string metric = otsum::to_string(defaults.metric);
  std::string strategy = otsum::to_string(defaults.strategy);
  std::string solver = otsum::to_string(defaults.solver.kind);
  std::string preset;
  CLI::Option* budget_option = nullptr;
  otsum::RunConfig config;
};

void add_config_flags(CLI::App* cmd, ConfigFlags& flags) {
  otsum::RunConfig& config = flags.config;
  cmd->add_option("--embeddings", config.embeddings_path,
                  "Embedding table (word2vec text format)")
      ->required();
  cmd->add_option("--metric", flags.metric, "Token cost metric")
      ->check(CLI::IsMember({"euclidean", "cosine"}))
      ->capture_default_str();
  cmd->add_option("--stopwords", config.stopwords,
                  "\"default\", \"none\", or a stop-word file")
      ->capture_default_str();
  cmd->add_option("--strategy", flags.strategy, "Sentence selection strategy")
      ->check(CLI::IsMember({"beam", "bip"}))
      ->capture_default_str();
  flags.budget_option =
      cmd->add_option("--budget,-B", config.budget, "Summary sentence budget")
          ->capture_default_str();
  cmd->add_option("--beam-width,-K", config.beam_width, "Beam width")
      ->capture_default_str();
  cmd->add_option("--iters,-T", config.iterations,
                  "Gradient iterations (bip strategy)")
      ->capture_default_str();
  cmd->add_option("--alpha", config.alpha, "Budget penalty weight (bip)")
      ->capture_default_str();
  cmd->add_option("--lr", config.learning_rate, "Learning rate (bip)")
      ->capture_default_str();
  cmd->add_option("--tau", config.tau, "Relaxation temperature (bip)")
      ->capture_default_str();
  cmd->add_option("--seed", config.seed, "Base RNG seed (bip)")
      ->capture_default_str();
  cmd->add_option("--solver", flags.solver, "Transport solver")
      ->check(CLI::IsMember({"auto", "exact", "sinkhorn"}))
      ->capture_default_str();
  cmd->add_option("--epsilon", config.solver.epsilon,
                  "Entropic regularization; <= 0 uses 0.1 x mean cost")
      ->capture_default_str();
  cmd->add_option("--tolerance", config.solver.tolerance,
                  "Sinkhorn marginal-violation stop threshold")
      ->capture_default_str();
  cmd->add_option("--max-iters", config.solver.max_iters,
                  "Sinkhorn iteration cap")
      ->capture_default_str();
  cmd->add_option("--exact-cap", config.solver.exact_cap,
                  "Largest support size the auto solver treats exactly")
      ->capture_default_str();
  cmd->add_option("--preset", flags.preset,
                  "Corpus budget preset (overridden by an explicit --budget)")
      ->check(CLI::IsMember({"multinews", "billsum", "pubmed", "cnndm"}));
  cmd->add_flag("--squared-penalty", config.squared_penalty,
                "Square the budget penalty instead of |B - sum b|");
  cmd->add_flag("--final-beam-only", config.final_beam_only,
                "Return the best of the final beam, not the best ever scored");
}

otsum::RunConfig finalize_config(ConfigFlags& flags) {
  otsum::RunConfig config = flags.config;
  config.metric = otsum::cost_metric_from_string(flags.metric);
  config.strategy = otsum::strategy_from_string(flags.strategy);
  config.solver.kind = otsum::solver_kind_from_string(flags.solver);
  if (!flags.preset.empty() && flags.budget_option->count() == 0) {
    otsum::apply_preset(config, flags.preset);
  }
  return config;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw otsum::Error(otsum::ErrorCode::kParseError, "cannot open " + path);
  }
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw otsum::Error(otsum::ErrorCode::kParseError, "cannot write " + path);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extractive summarization as optimal transport between "
               "document and summary token distributions"};
  app.set_version_flag("--version", otsum::kVersion);
  app.require_subcommand(1);

  ConfigFlags summarize_flags;
  ConfigFlags explain_flags;
  std::string input_path;
  std::string output_path;
  std::string results_path;
  std::string references_path;
  std::string csv_path;
  std::string svg_path;
  std::size_t doc_index = 0;

  CLI::App* summarize = app.add_subcommand(
      "summarize", "Summarize a JSONL corpus to JSONL results");
  summarize->add_option("--input", input_path, "JSONL corpus, \"-\" for stdin")
      ->required();
  summarize
      ->add_option("--output", output_path, "JSONL results, \"-\" for stdout")
      ->required();
  add_config_flags(summarize, summarize_flags);
  summarize
      ->add_option("--trace-dir", summarize_flags.config.trace_dir,
                   "Directory for per-document strategy traces")
      ->capture_default_str();
  summarize
      ->add_option("--jobs", summarize_flags.config.jobs, "Worker thread count")
      ->capture_default_str();

  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "Score results against references (unigram/bigram/LCS)");
  evaluate->add_option("--results", results_path, "JSONL from summarize")
      ->required();
  evaluate
      ->add_option("--references", references_path,
                   "JSONL lines {\"reference\": ...}")
      ->required();
  evaluate->add_option("--output", csv_path, "Score CSV, \"-\" for stdout")
      ->required();

  CLI::App* explain = app.add_subcommand(
      "explain", "Export one document's transport plan as CSV and SVG");
  explain->add_option("--input", input_path, "JSONL corpus, \"-\" for stdin")
      ->required();
  add_config_flags(explain, explain_flags);
  explain->add_option("--doc-index", doc_index, "Document line to explain")
      ->capture_default_str();
  explain->add_option("--csv", csv_path, "Plan CSV output path")->required();
  explain->add_option("--svg", svg_path, "Heatmap SVG output path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (summarize->parsed()) {
      const otsum::RunConfig config = finalize_config(summarize_flags);
      otsum::BatchResult batch;
      auto run = [&](std::istream& in, std::ostream& out) {
        batch = otsum::summarize(in, out, config);
      };
      if (input_path == "-" && output_path == "-") {
        run(std::cin, std::cout);
      } else if (input_path == "-") {
        auto out = open_output(output_path);
        run(std::cin, out);
      } else if (output_path == "-") {
        auto in = open_input(input_path);
        run(in, std::cout);
      } else {
        auto in = open_input(input_path);
        auto out = open_output(output_path);
        run(in, out);
      }
      if (batch.failures > 0) {
        std::cerr << batch.failures << " of " << batch.documents
                  << " documents failed\n";
        return kExitFailures;
      }
      return kExitOk;
    }
    if (evaluate->parsed()) {
      auto results = open_input(results_path);
      auto references = open_input(references_path);
      std::size_t failures = 0;
      if (csv_path == "-") {
        failures = otsum::evaluate(results, references, std::cout);
      } else {
        auto out = open_output(csv_path);
        failures = otsum::evaluate(results, references, out);
      }
      if (failures > 0) {
        std::cerr << failures << " documents could not be scored\n";
        return kExitFailures;
      }
      return kExitOk;
    }
    if (explain->parsed()) {
      const otsum::RunConfig config = finalize_config(explain_flags);
      auto csv = open_output(csv_path);
      auto svg = open_output(svg_path);
      if (input_path == "-") {
        otsum::explain(std::cin, config, doc_index, csv, svg);
      } else {
        auto in = open_input(input_path);
        otsum::explain(in, config, doc_index, csv, svg);
      }
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailures;
  }
  return kExitFailures;
}
