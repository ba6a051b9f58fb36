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

#ifndef LEXFUSE_SEMSCORE_H_
#define LEXFUSE_SEMSCORE_H_

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lexfuse/scorer.h"

namespace lexfuse {

// Externally produced (query, candidate) -> score map, e.g. the outputs of a
// fine-tuned cross-encoder. Immutable after load apart from the miss
// counter, which is atomic so concurrent lookups stay safe.
class ScoreTable {
 public:
  using Row = std::map<std::string, double, std::less<>>;
  using Entries = std::map<std::string, Row, std::less<>>;

  ScoreTable() = default;
  explicit ScoreTable(std::string name) : name_(std::move(name)) {}
  ScoreTable(const ScoreTable& other);
  ScoreTable& operator=(const ScoreTable& other);

  const std::string& name() const { return name_; }
  const Entries& entries() const { return entries_; }
  std::size_t size() const { return size_; }

  // Throws DataError on a duplicate key or a non-finite score.
  void insert(std::string query_id, std::string candidate_id, double score);

  std::optional<double> find(std::string_view query_id,
                             std::string_view candidate_id) const;
  // All scored candidates of one query, in candidate id order.
  const Row* row(std::string_view query_id) const;

  std::uint64_t misses() const { return misses_.load(std::memory_order_relaxed); }
  void count_miss() const { misses_.fetch_add(1, std::memory_order_relaxed); }

  bool operator==(const ScoreTable& other) const {
    return name_ == other.name_ && entries_ == other.entries_;
  }

 private:
  std::string name_;
  Entries entries_;
  std::size_t size_ = 0;
  mutable std::atomic<std::uint64_t> misses_{0};
};

// Reads "query_id<TAB>candidate_id<TAB>score" lines. Blank lines and lines
// starting with '#' are skipped. The table is named after the file stem.
ScoreTable load_score_table(const std::filesystem::path& path);
ScoreTable parse_score_table(std::string_view contents, std::string name,
                             std::string_view origin = "<memory>");
std::string format_score_table(const ScoreTable& table);
void write_score_table(const ScoreTable& table, const std::filesystem::path& path);

// Stored value, or 0.0 with the miss counted.
double lookup(const ScoreTable& table, std::string_view query_id,
              std::string_view candidate_id);

struct CoverageReport {
  std::size_t hits = 0;
  std::size_t misses = 0;
  std::vector<std::pair<std::string, std::string>> missing;  // sorted
};

CoverageReport coverage_check(
    const ScoreTable& table,
    const std::vector<std::pair<std::string, std::string>>& pairs);

class TableScorer : public Scorer {
 public:
  explicit TableScorer(const ScoreTable& table) : table_(table) {}
  std::optional<double> score(std::string_view query_id,
                              std::string_view candidate_id) const override {
    return table_.find(query_id, candidate_id);
  }

 private:
  const ScoreTable& table_;
};

}  // namespace lexfuse

#endif  // LEXFUSE_SEMSCORE_H_
