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

#include "otsum/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

#include "otsum/beam.hpp"
#include "otsum/bip.hpp"
#include "otsum/error.hpp"
#include "otsum/rouge.hpp"
#include "otsum/stopwords.hpp"
#include "otsum/version.hpp"

namespace otsum {

namespace {

std::string format_double(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

bool blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) {
    return std::isspace(c) != 0;
  });
}

std::unordered_set<std::string> resolve_stopwords(const std::string& spec) {
  if (spec == "default") return default_stopwords();
  if (spec == "none") return {};
  return load_stopwords(spec);
}

struct DocumentRun {
  TokenizeResult tokens;
  CostMatrix cost;
  std::vector<Distribution> dists;
  Distribution doc_dist;
  ExtractionVector extraction;
  double score = 0.0;
  bool budget_unmet = false;
  nlohmann::json beam_trace;            // null unless beam search ran
  std::vector<double> loss_history;     // empty unless the bip strategy ran
};

// Parses one JSONL document line and runs the configured strategy on it.
DocumentRun run_document(const std::string& line, std::size_t index,
                         const RunConfig& config, const EmbeddingTable& table,
                         const std::unordered_set<std::string>& stopwords) {
  if (blank(line)) {
    throw Error(ErrorCode::kParseError, "empty input line");
  }
  nlohmann::json doc_json;
  try {
    doc_json = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }

  TokenizeOptions options;
  options.stopwords = stopwords;
  DocumentRun run;
  if (doc_json.contains("sentences")) {
    const auto sentences = doc_json.at("sentences").get<std::vector<std::string>>();
    run.tokens = tokenize(sentences, table.index, options);
  } else if (doc_json.contains("text")) {
    run.tokens =
        tokenize(doc_json.at("text").get<std::string>(), table.index, options);
  } else {
    throw Error(ErrorCode::kParseError,
                "document needs a \"text\" or \"sentences\" field");
  }

  const Document& doc = run.tokens.document;
  const std::size_t p = run.tokens.vocab.size();
  run.cost = cost_matrix(run.tokens.vocab, table, config.metric);
  run.dists = sentence_distributions(doc, p);
  run.doc_dist = document_distribution(run.dists);

  const std::size_t eligible = doc.eligible_count();
  if (eligible < config.budget) {
    // Not enough material to search: take everything and score it once.
    std::vector<std::uint32_t> all;
    for (std::uint32_t i = 0; i < doc.size(); ++i) {
      if (doc.eligible(i)) all.push_back(i);
    }
    run.extraction = ExtractionVector::from_indices(all, doc.size());
    run.score = coverage(run.doc_dist,
                         summary_distribution(run.dists, run.extraction),
                         run.cost, config.solver);
    run.budget_unmet = true;
    return run;
  }

  if (config.strategy == Strategy::kBeam) {
    BeamConfig beam_config;
    beam_config.budget = config.budget;
    beam_config.beam_width = config.beam_width;
    beam_config.final_beam_only = config.final_beam_only;
    BeamResult result = beam_search(doc, run.dists, run.doc_dist, run.cost,
                                    beam_config, config.solver);
    run.extraction = std::move(result.extraction);
    run.score = result.score;
    run.beam_trace = std::move(result.trace);
  } else {
    BipConfig bip_config;
    bip_config.budget = config.budget;
    bip_config.iterations = config.iterations;
    bip_config.alpha = config.alpha;
    bip_config.learning_rate = config.learning_rate;
    bip_config.tau = config.tau;
    bip_config.seed = config.seed + index;  // independent stream per document
    bip_config.squared_penalty = config.squared_penalty;
    BipResult result = bip_optimize(doc, run.dists, run.doc_dist, run.cost,
                                    bip_config, config.solver);
    run.extraction = std::move(result.extraction);
    run.loss_history = std::move(result.loss_history);
    run.score = coverage(run.doc_dist,
                         summary_distribution(run.dists, run.extraction),
                         run.cost, config.solver);
  }
  return run;
}

std::string render_summary(const DocumentRun& run) {
  std::string text;
  for (std::uint32_t i : run.extraction.indices()) {
    if (!text.empty()) text += ' ';
    text += run.tokens.document.source_text[i];
  }
  return text;
}

struct LineOutcome {
  std::string line;
  bool failed = false;
};

LineOutcome process_line(const std::string& line, std::size_t index,
                         const RunConfig& config, const EmbeddingTable& table,
                         const std::unordered_set<std::string>& stopwords) {
  LineOutcome outcome;
  try {
    DocumentRun run = run_document(line, index, config, table, stopwords);
    nlohmann::json out{
        {"index", index},
        {"selected", run.extraction.indices()},
        {"summary", render_summary(run)},
        {"coverage", run.score},
        {"wasserstein", 1.0 - run.score},
        {"budget_unmet", run.budget_unmet},
        {"oov_dropped", run.tokens.oov_dropped},
    };
    if (!config.trace_dir.empty()) {
      const std::filesystem::path dir(config.trace_dir);
      std::string name;
      if (!run.beam_trace.is_null()) {
        name = "doc" + std::to_string(index) + "_beam.json";
        std::ofstream trace(dir / name, std::ios::binary);
        trace << run.beam_trace.dump(2) << '\n';
      } else if (!run.loss_history.empty()) {
        name = "doc" + std::to_string(index) + "_loss.csv";
        std::ofstream trace(dir / name, std::ios::binary);
        write_loss_csv(run.loss_history, trace);
      }
      if (!name.empty()) out["trace"] = name;
    }
    outcome.line = out.dump();
  } catch (const std::exception& e) {
    outcome.failed = true;
    outcome.line = nlohmann::json{{"index", index}, {"error", e.what()}}.dump();
  }
  return outcome;
}

}  // namespace

const char* to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::kBeam: return "beam";
    case Strategy::kBip: return "bip";
  }
  return "unknown";
}

Strategy strategy_from_string(std::string_view name) {
  if (name == "beam") return Strategy::kBeam;
  if (name == "bip") return Strategy::kBip;
  throw Error(ErrorCode::kInvalidConfig,
              "unknown strategy \"" + std::string(name) + "\"");
}

void RunConfig::validate() const {
  const auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kInvalidConfig, what);
  };
  if (embeddings_path.empty()) fail("embeddings path is required");
  if (budget < 1) fail("budget must be >= 1");
  if (beam_width < 1) fail("beam width must be >= 1");
  if (iterations < 1) fail("iteration count must be >= 1");
  if (alpha < 0.0) fail("alpha must be >= 0");
  if (learning_rate <= 0.0) fail("learning rate must be > 0");
  if (tau <= 0.0) fail("tau must be > 0");
  if (solver.tolerance <= 0.0) fail("solver tolerance must be > 0");
  if (solver.max_iters < 1) fail("solver max_iters must be >= 1");
  if (jobs < 1) fail("jobs must be >= 1");
}

void to_json(nlohmann::json& j, const RunConfig& config) {
  j = nlohmann::json{
      {"embeddings", config.embeddings_path},
      {"metric", to_string(config.metric)},
      {"stopwords", config.stopwords},
      {"strategy", to_string(config.strategy)},
      {"budget", config.budget},
      {"beam_width", config.beam_width},
      {"final_beam_only", config.final_beam_only},
      {"iters", config.iterations},
      {"alpha", config.alpha},
      {"lr", config.learning_rate},
      {"tau", config.tau},
      {"seed", config.seed},
      {"squared_penalty", config.squared_penalty},
      {"solver",
       {{"kind", to_string(config.solver.kind)},
        {"epsilon", config.solver.epsilon},
        {"max_iters", config.solver.max_iters},
        {"tolerance", config.solver.tolerance},
        {"exact_cap", config.solver.exact_cap}}},
      {"trace_dir", config.trace_dir},
      {"jobs", config.jobs},
  };
}

void from_json(const nlohmann::json& j, RunConfig& config) {
  RunConfig defaults;
  config.embeddings_path = j.value("embeddings", defaults.embeddings_path);
  config.metric =
      cost_metric_from_string(j.value("metric", to_string(defaults.metric)));
  config.stopwords = j.value("stopwords", defaults.stopwords);
  config.strategy =
      strategy_from_string(j.value("strategy", to_string(defaults.strategy)));
  config.budget = j.value("budget", defaults.budget);
  config.beam_width = j.value("beam_width", defaults.beam_width);
  config.final_beam_only = j.value("final_beam_only", defaults.final_beam_only);
  config.iterations = j.value("iters", defaults.iterations);
  config.alpha = j.value("alpha", defaults.alpha);
  config.learning_rate = j.value("lr", defaults.learning_rate);
  config.tau = j.value("tau", defaults.tau);
  config.seed = j.value("seed", defaults.seed);
  config.squared_penalty = j.value("squared_penalty", defaults.squared_penalty);
  if (j.contains("solver")) {
    const nlohmann::json& s = j.at("solver");
    config.solver.kind =
        solver_kind_from_string(s.value("kind", to_string(defaults.solver.kind)));
    config.solver.epsilon = s.value("epsilon", defaults.solver.epsilon);
    config.solver.max_iters = s.value("max_iters", defaults.solver.max_iters);
    config.solver.tolerance = s.value("tolerance", defaults.solver.tolerance);
    config.solver.exact_cap = s.value("exact_cap", defaults.solver.exact_cap);
  } else {
    config.solver = defaults.solver;
  }
  config.trace_dir = j.value("trace_dir", defaults.trace_dir);
  config.jobs = j.value("jobs", defaults.jobs);
}

void apply_preset(RunConfig& config, std::string_view name) {
  if (name == "multinews") {
    config.budget = 9;
  } else if (name == "billsum") {
    config.budget = 7;
  } else if (name == "pubmed") {
    config.budget = 6;
  } else if (name == "cnndm") {
    config.budget = 3;
  } else {
    throw Error(ErrorCode::kInvalidConfig,
                "unknown preset \"" + std::string(name) + "\"");
  }
}

BatchResult summarize(std::istream& input, std::ostream& output,
                      const RunConfig& config) {
  config.validate();
  const EmbeddingTable table = load_embeddings(config.embeddings_path);
  const std::unordered_set<std::string> stopwords =
      resolve_stopwords(config.stopwords);
  if (!config.trace_dir.empty()) {
    std::filesystem::create_directories(config.trace_dir);
  }

  output << nlohmann::json{{"version", kVersion}, {"config", config}}.dump()
         << '\n';

  std::vector<std::string> lines;
  for (std::string line; std::getline(input, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }

  std::vector<LineOutcome> outcomes(lines.size());
  const std::size_t workers = std::min(config.jobs, std::max<std::size_t>(lines.size(), 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < lines.size(); ++i) {
      outcomes[i] = process_line(lines[i], i, config, table, stopwords);
    }
  } else {
    // Workers pull the next unclaimed document; results land in their input
    // slot, so the merged output preserves input order exactly.
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < lines.size();
             i = next.fetch_add(1)) {
          outcomes[i] = process_line(lines[i], i, config, table, stopwords);
        }
      });
    }
    for (std::thread& t : pool) t.join();
  }

  BatchResult result;
  result.documents = lines.size();
  for (const LineOutcome& outcome : outcomes) {
    output << outcome.line << '\n';
    if (outcome.failed) ++result.failures;
  }
  return result;
}

std::size_t evaluate(std::istream& results, std::istream& references,
                     std::ostream& csv_out) {
  struct Entry {
    std::optional<std::string> summary;
    std::string error;
  };
  std::map<std::size_t, Entry> docs;
  for (std::string line; std::getline(results, line);) {
    if (blank(line)) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParseError,
                  std::string("results line: ") + e.what());
    }
    if (!j.contains("index")) continue;  // run header
    Entry entry;
    if (j.contains("summary")) {
      entry.summary = j.at("summary").get<std::string>();
    } else {
      entry.error = j.value("error", "missing summary");
    }
    docs[j.at("index").get<std::size_t>()] = std::move(entry);
  }

  std::map<std::size_t, std::string> refs;
  std::size_t position = 0;
  for (std::string line; std::getline(references, line);) {
    if (blank(line)) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParseError,
                  std::string("references line: ") + e.what());
    }
    if (!j.contains("reference")) {
      throw Error(ErrorCode::kParseError,
                  "reference line needs a \"reference\" field");
    }
    const std::size_t index = j.contains("index")
                                  ? j.at("index").get<std::size_t>()
                                  : position;
    refs[index] = j.at("reference").get<std::string>();
    ++position;
  }

  csv_out << "index,rouge1_precision,rouge1_recall,rouge1_f1"
             ",rouge2_precision,rouge2_recall,rouge2_f1"
             ",rougeL_precision,rougeL_recall,rougeL_f1,note\n";
  std::size_t failures = 0;
  std::size_t scored = 0;
  double mean_acc[9] = {};
  for (const auto& [index, entry] : docs) {
    if (!entry.summary.has_value()) {
      ++failures;
      csv_out << index << ",,,,,,,,,," << "upstream_error\n";
      continue;
    }
    auto ref = refs.find(index);
    if (ref == refs.end()) {
      ++failures;
      csv_out << index << ",,,,,,,,,,"
              << to_string(ErrorCode::kMissingReference) << '\n';
      continue;
    }
    // Same token rule as the summarizer, but nothing removed: evaluation
    // sees the full surface text.
    const std::vector<std::string> candidate =
        split_tokens(*entry.summary, /*lowercase=*/true);
    const std::vector<std::string> reference =
        split_tokens(ref->second, /*lowercase=*/true);
    const RougeScore scores[3] = {rouge_n(candidate, reference, 1),
                                  rouge_n(candidate, reference, 2),
                                  rouge_l(candidate, reference)};
    csv_out << index;
    std::size_t slot = 0;
    for (const RougeScore& s : scores) {
      for (double v : {s.precision, s.recall, s.f1}) {
        csv_out << ',' << format_double(v);
        mean_acc[slot++] += v;
      }
    }
    csv_out << ",\n";
    ++scored;
  }
  csv_out << "mean";
  for (double acc : mean_acc) {
    csv_out << ','
            << format_double(scored > 0 ? acc / static_cast<double>(scored) : 0.0);
  }
  csv_out << ",scored_" << scored << "_of_" << docs.size() << '\n';
  return failures;
}

void explain(std::istream& input, const RunConfig& config,
             std::size_t doc_index, std::ostream& csv_out,
             std::ostream& svg_out) {
  config.validate();
  const EmbeddingTable table = load_embeddings(config.embeddings_path);
  const std::unordered_set<std::string> stopwords =
      resolve_stopwords(config.stopwords);

  std::string line;
  std::size_t index = 0;
  bool found = false;
  for (; std::getline(input, line); ++index) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (index == doc_index) {
      found = true;
      break;
    }
  }
  if (!found) {
    throw Error(ErrorCode::kInvalidConfig,
                "document index " + std::to_string(doc_index) +
                    " beyond end of input");
  }

  DocumentRun run = run_document(line, doc_index, config, table, stopwords);
  const Distribution summary =
      summary_distribution(run.dists, run.extraction);
  const TransportPlan plan =
      solve(run.doc_dist, summary, run.cost, config.solver);

  const std::vector<std::string>& tokens = run.tokens.vocab.tokens;
  write_plan_csv(plan, run.cost, tokens, tokens, csv_out,
                 /*with_product=*/true);

  // The heatmap keeps only the summary-supported columns; all other
  // columns are structurally zero.
  const auto& support = summary.entries();
  TransportPlan grid;
  grid.flows.resize(plan.flows.rows(),
                    static_cast<Eigen::Index>(support.size()));
  std::vector<std::string> col_labels;
  col_labels.reserve(support.size());
  for (std::size_t s = 0; s < support.size(); ++s) {
    grid.flows.col(static_cast<Eigen::Index>(s)) =
        plan.flows.col(static_cast<Eigen::Index>(support[s].id));
    col_labels.push_back(tokens[support[s].id]);
  }
  render_plan_svg(grid, tokens, col_labels, svg_out);
}

}  // namespace otsum
