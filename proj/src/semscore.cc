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

#include "lexfuse/semscore.h"

#include <algorithm>
#include <cmath>

#include "lexfuse/error.h"
#include "lexfuse/text.h"

namespace lexfuse {

ScoreTable::ScoreTable(const ScoreTable& other)
    : name_(other.name_), entries_(other.entries_), size_(other.size_),
      misses_(other.misses()) {}

ScoreTable& ScoreTable::operator=(const ScoreTable& other) {
  name_ = other.name_;
  entries_ = other.entries_;
  size_ = other.size_;
  misses_.store(other.misses(), std::memory_order_relaxed);
  return *this;
}

void ScoreTable::insert(std::string query_id, std::string candidate_id, double score) {
  if (!std::isfinite(score)) {
    throw DataError("non-finite score for (" + query_id + ", " + candidate_id + ")");
  }
  auto& row = entries_[query_id];
  if (!row.emplace(candidate_id, score).second) {
    throw DataError("duplicate score-table key (" + query_id + ", " + candidate_id + ")");
  }
  ++size_;
}

std::optional<double> ScoreTable::find(std::string_view query_id,
                                       std::string_view candidate_id) const {
  const Row* r = row(query_id);
  if (r == nullptr) return std::nullopt;
  const auto it = r->find(candidate_id);
  if (it == r->end()) return std::nullopt;
  return it->second;
}

const ScoreTable::Row* ScoreTable::row(std::string_view query_id) const {
  const auto it = entries_.find(query_id);
  return it == entries_.end() ? nullptr : &it->second;
}

ScoreTable parse_score_table(std::string_view contents, std::string name,
                             std::string_view origin) {
  ScoreTable table(std::move(name));
  std::size_t line_no = 0;
  for (auto line : split(contents, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    const std::string where = std::string(origin) + ":" + std::to_string(line_no);
    const auto fields = split(line, '\t');
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty()) {
      throw DataError(where + ": expected query_id<TAB>candidate_id<TAB>score");
    }
    double score = 0.0;
    if (!parse_double(fields[2], score)) {
      throw DataError(where + ": bad score '" + std::string(fields[2]) + "'");
    }
    if (!std::isfinite(score)) {
      throw DataError(where + ": non-finite score '" + std::string(fields[2]) + "'");
    }
    try {
      table.insert(std::string(fields[0]), std::string(fields[1]), score);
    } catch (const DataError& e) {
      throw DataError(where + ": " + e.what());
    }
  }
  return table;
}

ScoreTable load_score_table(const std::filesystem::path& path) {
  return parse_score_table(read_file(path), path.stem().string(), path.string());
}

std::string format_score_table(const ScoreTable& table) {
  std::string out;
  for (const auto& [query, row] : table.entries()) {
    for (const auto& [candidate, score] : row) {
      out += query;
      out += '\t';
      out += candidate;
      out += '\t';
      out += format_double(score);
      out += '\n';
    }
  }
  return out;
}

void write_score_table(const ScoreTable& table, const std::filesystem::path& path) {
  write_file(path, format_score_table(table));
}

double lookup(const ScoreTable& table, std::string_view query_id,
              std::string_view candidate_id) {
  if (const auto v = table.find(query_id, candidate_id)) return *v;
  table.count_miss();
  return 0.0;
}

CoverageReport coverage_check(
    const ScoreTable& table,
    const std::vector<std::pair<std::string, std::string>>& pairs) {
  CoverageReport report;
  for (const auto& [q, c] : pairs) {
    if (table.find(q, c)) {
      ++report.hits;
    } else {
      ++report.misses;
      report.missing.emplace_back(q, c);
    }
  }
  std::sort(report.missing.begin(), report.missing.end());
  return report;
}

}  // namespace lexfuse
