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

#ifndef LEXFUSE_RUN_H_
#define LEXFUSE_RUN_H_

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace lexfuse {

struct ScoredId {
  std::string id;
  double score = 0.0;

  bool operator==(const ScoredId&) const = default;
};

// Per-query candidate scores. Candidate ids are unique within a vector.
using ScoreVector = std::vector<ScoredId>;

// query id -> selected candidate ids (a label run when used for voting).
using Selections = std::map<std::string, std::set<std::string>, std::less<>>;

// query id -> yes/no label.
using BinaryLabels = std::map<std::string, bool, std::less<>>;

// Sorts by score descending, then id ascending.
void sort_ranking(ScoreVector& v);
bool is_ranked(const ScoreVector& v);

// Ranked candidates per query. Queries iterate in ascending id order.
struct RunResult {
  std::string name;
  std::map<std::string, ScoreVector, std::less<>> queries;

  // Throws DataError on a duplicate candidate, an unranked list or a
  // non-finite score.
  void validate() const;
  Selections selections() const;

  bool operator==(const RunResult&) const = default;
};

// TSV "query_id<TAB>candidate_id<TAB>score<TAB>run_name" preceded by a
// "# run: <name>" header line.
std::string format_run(const RunResult& run);
RunResult parse_run(std::string_view contents, std::string_view origin = "<memory>");
void write_run(const RunResult& run, const std::filesystem::path& path);
RunResult read_run(const std::filesystem::path& path);

// TSV "query_id<TAB>Y|N" for yes/no label runs.
std::string format_labels(const BinaryLabels& labels);
BinaryLabels parse_labels(std::string_view contents, std::string_view origin = "<memory>");
BinaryLabels read_labels(const std::filesystem::path& path);

}  // namespace lexfuse

#endif  // LEXFUSE_RUN_H_
