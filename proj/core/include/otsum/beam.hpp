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

#ifndef OTSUM_BEAM_HPP_
#define OTSUM_BEAM_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "otsum/embedding_store.hpp"
#include "otsum/ot.hpp"
#include "otsum/text_model.hpp"

namespace otsum {

struct BeamConfig {
  std::size_t budget = 3;
  std::size_t beam_width = 5;
  // Score only the beam survivors each round instead of every candidate.
  bool final_beam_only = false;
};

struct Candidate {
  std::vector<std::uint32_t> selected;  // sorted ascending
  double score = 0.0;                   // coverage of the induced summary
};

// All single-sentence extensions of the candidate by an eligible, not yet
// selected sentence. Selections stay sorted; duplicates cannot arise.
std::vector<Candidate> generate_successors(const Candidate& candidate,
                                           const Document& doc);

struct BeamResult {
  ExtractionVector extraction;
  double score = 0.0;
  std::uint64_t ot_solves = 0;
  nlohmann::json trace;  // per-round beams: selections and scores
};

// Width-limited best-first growth of the selected set, one sentence per
// round, up to the budget. Candidates are ranked by coverage; ties resolve
// to the lexicographically smaller index set. Scores are memoized across
// rounds so a reappearing set is never re-solved.
BeamResult beam_search(const Document& doc,
                       std::span<const Distribution> sentence_dists,
                       const Distribution& doc_dist, const CostMatrix& cost,
                       const BeamConfig& beam_config,
                       const SolverConfig& solver_config);

}  // namespace otsum

#endif  // OTSUM_BEAM_HPP_
