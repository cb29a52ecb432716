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

#ifndef OTSUM_STOPWORDS_HPP_
#define OTSUM_STOPWORDS_HPP_

#include <filesystem>
#include <string>
#include <unordered_set>

namespace otsum {

// Bundled English stop-word list (lowercase).
const std::unordered_set<std::string>& default_stopwords();

// Plain-text list, one token per line; blank lines ignored. Entries are
// lowercased.
std::unordered_set<std::string> load_stopwords(const std::filesystem::path& path);

}  // namespace otsum

#endif  // OTSUM_STOPWORDS_HPP_
