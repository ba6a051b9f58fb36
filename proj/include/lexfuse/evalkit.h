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

#ifndef LEXFUSE_EVALKIT_H_
#define LEXFUSE_EVALKIT_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "lexfuse/run.h"

namespace lexfuse {

// query id -> relevant candidate ids (never empty).
using GoldLabels = Selections;

GoldLabels load_gold(const std::filesystem::path& path);
GoldLabels parse_gold(const nlohmann::json& doc, std::string_view origin = "<memory>");
// Values may be "Y"/"N", "yes"/"no" or booleans.
BinaryLabels load_binary_gold(const std::filesystem::path& path);
BinaryLabels parse_binary_gold(const nlohmann::json& doc, std::string_view origin = "<memory>");

// Pooled counts over all gold queries.
struct MicroReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t correct = 0;
  std::size_t retrieved = 0;
  std::size_t relevant = 0;
};

struct QueryPrf {
  std::string query_id;
  double precision = 0.0;
  double recall = 0.0;
  double f2 = 0.0;
};

// Per-query measures averaged over queries.
struct MacroReport {
  double precision = 0.0;
  double recall = 0.0;
  double f2 = 0.0;
  std::vector<QueryPrf> per_query;
};

// How macro averaging treats gold queries the run never answered.
enum class Unanswered { kZeroScore, kSkip };

double f_beta(double precision, double recall, double beta);

MicroReport micro_prf(const Selections& run, const GoldLabels& gold);
MacroReport macro_prf2(const Selections& run, const GoldLabels& gold,
                       Unanswered unanswered = Unanswered::kZeroScore);

// Global recall of each query's top-k prefix.
std::map<std::size_t, double> recall_at_k(const RunResult& ranked, const GoldLabels& gold,
                                          std::span<const std::size_t> ks);

double accuracy(const BinaryLabels& predicted, const BinaryLabels& gold);

nlohmann::json to_json(const MicroReport& report);
nlohmann::json to_json(const MacroReport& report);
std::string macro_csv(const MacroReport& report);

}  // namespace lexfuse

#endif  // LEXFUSE_EVALKIT_H_
