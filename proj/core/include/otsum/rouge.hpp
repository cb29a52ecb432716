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

#ifndef OTSUM_ROUGE_HPP_
#define OTSUM_ROUGE_HPP_

#include <cstddef>
#include <span>
#include <string>

namespace otsum {

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Clipped n-gram overlap of candidate against reference. Both inputs are
// token sequences; empty inputs (or inputs shorter than n) score zero.
RougeScore rouge_n(std::span<const std::string> candidate,
                   std::span<const std::string> reference, std::size_t n);

// Longest common subsequence overlap.
RougeScore rouge_l(std::span<const std::string> candidate,
                   std::span<const std::string> reference);

}  // namespace otsum

#endif  // OTSUM_ROUGE_HPP_
