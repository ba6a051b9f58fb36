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

#include "lexfuse/run.h"

#include <algorithm>
#include <cmath>

#include "lexfuse/error.h"
#include "lexfuse/text.h"

namespace lexfuse {
namespace {

bool ranks_before(const ScoredId& a, const ScoredId& b) {
  return a.score != b.score ? a.score > b.score : a.id < b.id;
}

std::string where(std::string_view origin, std::size_t line) {
  return std::string(origin) + ":" + std::to_string(line);
}

}  // namespace

void sort_ranking(ScoreVector& v) { std::sort(v.begin(), v.end(), ranks_before); }

bool is_ranked(const ScoreVector& v) {
  return std::is_sorted(v.begin(), v.end(), ranks_before);
}

void RunResult::validate() const {
  for (const auto& [query, ranking] : queries) {
    std::set<std::string_view> seen;
    for (const auto& c : ranking) {
      if (!std::isfinite(c.score)) {
        throw DataError("run " + name + ": non-finite score for " + query + "/" + c.id);
      }
      if (!seen.insert(c.id).second) {
        throw DataError("run " + name + ": duplicate candidate " + c.id + " for query " + query);
      }
    }
    if (!is_ranked(ranking)) {
      throw DataError("run " + name + ": ranking for query " + query + " is not ordered");
    }
  }
}

Selections RunResult::selections() const {
  Selections out;
  for (const auto& [query, ranking] : queries) {
    auto& set = out[query];
    for (const auto& c : ranking) set.insert(c.id);
  }
  return out;
}

std::string format_run(const RunResult& run) {
  run.validate();
  std::string out = "# run: " + run.name + "\n";
  for (const auto& [query, ranking] : run.queries) {
    for (const auto& c : ranking) {
      out += query;
      out += '\t';
      out += c.id;
      out += '\t';
      out += format_double(c.score);
      out += '\t';
      out += run.name;
      out += '\n';
    }
  }
  return out;
}

RunResult parse_run(std::string_view contents, std::string_view origin) {
  RunResult run;
  bool named = false;
  std::size_t line_no = 0;
  for (auto line : split(contents, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.front() == '#') {
      constexpr std::string_view kHeader = "# run: ";
      if (!named && line.substr(0, kHeader.size()) == kHeader) {
        run.name = std::string(line.substr(kHeader.size()));
        named = true;
      }
      continue;
    }
    const auto fields = split(line, '\t');
    if (fields.size() != 4 || fields[0].empty() || fields[1].empty()) {
      throw DataError(where(origin, line_no) +
                      ": expected query_id<TAB>candidate_id<TAB>score<TAB>run_name");
    }
    double score = 0.0;
    if (!parse_double(fields[2], score) || !std::isfinite(score)) {
      throw DataError(where(origin, line_no) + ": bad score '" + std::string(fields[2]) + "'");
    }
    if (!named) {
      run.name = std::string(fields[3]);
      named = true;
    } else if (fields[3] != run.name) {
      throw DataError(where(origin, line_no) + ": run name '" + std::string(fields[3]) +
                      "' differs from '" + run.name + "'");
    }
    auto& ranking = run.queries[std::string(fields[0])];
    for (const auto& c : ranking) {
      if (c.id == fields[1]) {
        throw DataError(where(origin, line_no) + ": duplicate candidate " +
                        std::string(fields[1]) + " for query " + std::string(fields[0]));
      }
    }
    ranking.push_back(ScoredId{std::string(fields[1]), score});
  }
  for (auto& [query, ranking] : run.queries) sort_ranking(ranking);
  return run;
}

void write_run(const RunResult& run, const std::filesystem::path& path) {
  write_file(path, format_run(run));
}

RunResult read_run(const std::filesystem::path& path) {
  return parse_run(read_file(path), path.string());
}

std::string format_labels(const BinaryLabels& labels) {
  std::string out;
  for (const auto& [query, yes] : labels) {
    out += query;
    out += yes ? "\tY\n" : "\tN\n";
  }
  return out;
}

BinaryLabels parse_labels(std::string_view contents, std::string_view origin) {
  BinaryLabels labels;
  std::size_t line_no = 0;
  for (auto line : split(contents, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 2 || fields[0].empty() || (fields[1] != "Y" && fields[1] != "N")) {
      throw DataError(where(origin, line_no) + ": expected query_id<TAB>Y|N");
    }
    if (!labels.emplace(std::string(fields[0]), fields[1] == "Y").second) {
      throw DataError(where(origin, line_no) + ": duplicate query " + std::string(fields[0]));
    }
  }
  return labels;
}

BinaryLabels read_labels(const std::filesystem::path& path) {
  return parse_labels(read_file(path), path.string());
}

}  // namespace lexfuse
