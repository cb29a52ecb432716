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

#ifndef OTSUM_PIPELINE_HPP_
#define OTSUM_PIPELINE_HPP_

#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "otsum/embedding_store.hpp"
#include "otsum/ot.hpp"

namespace otsum {

enum class Strategy { kBeam, kBip };

const char* to_string(Strategy strategy);
Strategy strategy_from_string(std::string_view name);

// Effective settings of one batch run. Serializes to/from JSON so a run's
// output header can be replayed verbatim.
struct RunConfig {
  std::string embeddings_path;
  CostMetric metric = CostMetric::kEuclidean;
  // "default" for the bundled English list, "none" to disable removal, any
  // other value is read as a file path (one stop word per line).
  std::string stopwords = "default";
  Strategy strategy = Strategy::kBeam;
  std::size_t budget = 3;
  std::size_t beam_width = 5;
  bool final_beam_only = false;
  int iterations = 200;
  double alpha = 1.0;
  double learning_rate = 0.1;
  double tau = 1.0;
  std::uint64_t seed = 0;
  bool squared_penalty = false;
  SolverConfig solver;
  // When non-empty, per-document traces (beam JSON / loss CSV) land here.
  std::string trace_dir;
  std::size_t jobs = 1;

  // Throws kInvalidConfig on out-of-range fields (budget 0, lr <= 0, ...).
  void validate() const;
};

void to_json(nlohmann::json& j, const RunConfig& config);
void from_json(const nlohmann::json& j, RunConfig& config);

// Budget defaults by corpus name: multinews 9, billsum 7, pubmed 6, cnndm 3.
// Unknown names throw kInvalidConfig.
void apply_preset(RunConfig& config, std::string_view name);

struct BatchResult {
  std::size_t documents = 0;
  std::size_t failures = 0;
};

// Reads JSONL documents ({"text": ...} or {"sentences": [...]}), writes a
// header line {"version", "config"} followed by one result line per input
// line, in input order. Per-document failures become {"index", "error"}
// lines and never abort the batch. Documents run on config.jobs workers.
BatchResult summarize(std::istream& input, std::ostream& output,
                      const RunConfig& config);

// Joins summarize output with references ({"reference": ...}, aligned by
// "index" when present, else by line order) and writes per-document plus
// mean unigram, bigram and LCS F-scores as CSV. Returns the number of
// documents that could not be scored (missing reference or upstream error).
std::size_t evaluate(std::istream& results, std::istream& references,
                     std::ostream& csv_out);

// Summarizes the doc_index-th document of the input and exports the
// transport plan between the document and summary distributions: one CSV
// row per nonzero flow (tokens, flow, cost, flow*cost) and a grid heatmap.
void explain(std::istream& input, const RunConfig& config,
             std::size_t doc_index, std::ostream& csv_out,
             std::ostream& svg_out);

// Grayscale grid, cell darkness proportional to flow / max flow, axes
// labeled with the token strings.
void render_plan_svg(const TransportPlan& plan,
                     std::span<const std::string> source_labels,
                     std::span<const std::string> target_labels,
                     std::ostream& out);

}  // namespace otsum

#endif  // OTSUM_PIPELINE_HPP_
