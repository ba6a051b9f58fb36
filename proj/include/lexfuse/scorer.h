// Copyright 2026 The lexfuse Authors
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

#ifndef LEXFUSE_SCORER_H_
#define LEXFUSE_SCORER_H_

#include <optional>
#include <string_view>

namespace lexfuse {

// A deterministic (query, candidate) -> score mapping. Implementations wrap
// the lexical index or an externally produced score table; nullopt means the
// scorer has no opinion about the pair.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual std::optional<double> score(std::string_view query_id,
                                      std::string_view candidate_id) const = 0;
};

}  // namespace lexfuse

#endif  // LEXFUSE_SCORER_H_
