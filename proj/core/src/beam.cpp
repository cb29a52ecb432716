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

#include "otsum/beam.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include "otsum/error.hpp"

namespace otsum {

namespace {

// Higher score first; equal scores resolve to the lexicographically
// smaller index set so pruning and the final argmax are deterministic.
bool better(const Candidate& lhs, const Candidate& rhs) {
  if (lhs.score != rhs.score) return lhs.score > rhs.score;
  return lhs.selected < rhs.selected;
}

}  // namespace

std::vector<Candidate> generate_successors(const Candidate& candidate,
                                           const Document& doc) {
  std::vector<Candidate> successors;
  for (std::uint32_t i = 0; i < doc.size(); ++i) {
    if (!doc.eligible(i)) continue;
    if (std::binary_search(candidate.selected.begin(), candidate.selected.end(), i)) {
      continue;
    }
    Candidate next;
    next.selected = candidate.selected;
    next.selected.insert(
        std::upper_bound(next.selected.begin(), next.selected.end(), i), i);
    successors.push_back(std::move(next));
  }
  return successors;
}

BeamResult beam_search(const Document& doc,
                       std::span<const Distribution> sentence_dists,
                       const Distribution& doc_dist, const CostMatrix& cost,
                       const BeamConfig& beam_config,
                       const SolverConfig& solver_config) {
  if (beam_config.budget < 1 || beam_config.beam_width < 1) {
    throw Error(ErrorCode::kInvalidConfig, "budget and beam width must be >= 1");
  }
  if (doc.eligible_count() == 0) {
    throw Error(ErrorCode::kEmptyDocument, "no eligible sentence to select");
  }

  BeamResult result;
  result.trace = nlohmann::json{{"rounds", nlohmann::json::array()}};
  // Reappearing index sets (merged successors of different beams, or
  // final_beam_only re-expansions) are never re-solved.
  std::map<std::vector<std::uint32_t>, double> memo;
  const auto score_of = [&](const std::vector<std::uint32_t>& selected) {
    auto it = memo.find(selected);
    if (it != memo.end()) return it->second;
    const auto marks = ExtractionVector::from_indices(selected, doc.size());
    const double score =
        coverage(doc_dist, summary_distribution(sentence_dists, marks), cost,
                 solver_config);
    ++result.ot_solves;
    memo.emplace(selected, score);
    return score;
  };

  std::vector<Candidate> beam{Candidate{}};
  bool have_best = false;
  Candidate best;
  for (std::size_t round = 0; round < beam_config.budget; ++round) {
    // Union of all successor sets: the map key merges duplicates.
    std::map<std::vector<std::uint32_t>, Candidate> pool;
    for (const Candidate& parent : beam) {
      for (Candidate& next : generate_successors(parent, doc)) {
        pool.try_emplace(next.selected, std::move(next));
      }
    }
    if (pool.empty()) break;

    std::vector<Candidate> scored;
    scored.reserve(pool.size());
    for (auto& [selected, candidate] : pool) {
      candidate.score = score_of(selected);
      scored.push_back(std::move(candidate));
    }
    std::sort(scored.begin(), scored.end(), better);
    if (scored.size() > beam_config.beam_width) {
      scored.resize(beam_config.beam_width);
    }
    beam = std::move(scored);

    nlohmann::json round_json = nlohmann::json::array();
    for (const Candidate& c : beam) {
      round_json.push_back({{"selected", c.selected}, {"score", c.score}});
    }
    result.trace["rounds"].push_back(std::move(round_json));

    if (!beam_config.final_beam_only) {
      for (const Candidate& c : beam) {
        if (!have_best || better(c, best)) {
          best = c;
          have_best = true;
        }
      }
    }
  }

  if (beam_config.final_beam_only || !have_best) {
    best = beam.front();
    for (const Candidate& c : beam) {
      if (better(c, best)) best = c;
    }
  }
  result.extraction = ExtractionVector::from_indices(best.selected, doc.size());
  result.score = best.score;
  return result;
}

}  // namespace otsum
