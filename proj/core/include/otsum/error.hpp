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

#ifndef OTSUM_ERROR_HPP_
#define OTSUM_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace otsum {

enum class ErrorCode {
  kEmptyDocument,
  kAllSentencesEmpty,
  kEmptySelection,
  kParseError,
  kDimensionMismatch,
  kMissingToken,
  kZeroNormVector,
  kInfeasibleMarginals,
  kMissingDuals,
  kMissingReference,
  kInvalidConfig,
  kInternal,
};

const char* to_string(ErrorCode code);

// Library-wide exception type. The code identifies the contract violation;
// the message carries instance detail (line numbers, token names, sums).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace otsum

#endif  // OTSUM_ERROR_HPP_
