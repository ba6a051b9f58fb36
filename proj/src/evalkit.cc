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

#include "lexfuse/evalkit.h"

#include <algorithm>

#include "lexfuse/error.h"
#include "lexfuse/text.h"

namespace lexfuse {
namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::size_t overlap(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::size_t n = 0;
  for (const auto& x : a) n += b.count(x);
  return n;
}

void check_queries_in_gold(const Selections& run, const GoldLabels& gold) {
  for (const auto& [query, _] : run) {
    if (!gold.contains(query)) throw DataError("run query not in gold labels: " + query);
  }
}

nlohmann::json parse_json_file(const std::filesystem::path& path) {
  try {
    return nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": invalid JSON: " + e.what());
  }
}

}  // namespace

GoldLabels parse_gold(const nlohmann::json& doc, std::string_view origin) {
  const std::string where(origin);
  if (!doc.is_object()) throw DataError(where + ": gold labels must be a JSON object");
  GoldLabels gold;
  for (const auto& [query, list] : doc.items()) {
    if (!list.is_array()) {
      throw DataError(where + ": gold entry for " + query + " must be a list");
    }
    auto& set = gold[query];
    for (const auto& item : list) {
      if (!item.is_string()) {
        throw DataError(where + ": gold entry for " + query + " must list strings");
      }
      set.insert(item.get<std::string>());
    }
    if (set.empty()) throw DataError(where + ": empty gold set for query " + query);
  }
  return gold;
}

GoldLabels load_gold(const std::filesystem::path& path) {
  return parse_gold(parse_json_file(path), path.string());
}

BinaryLabels parse_binary_gold(const nlohmann::json& doc, std::string_view origin) {
  const std::string where(origin);
  if (!doc.is_object()) throw DataError(where + ": gold labels must be a JSON object");
  BinaryLabels gold;
  for (const auto& [query, value] : doc.items()) {
    if (value.is_boolean()) {
      gold[query] = value.get<bool>();
      continue;
    }
    if (value.is_string()) {
      const auto s = value.get<std::string>();
      if (s == "Y" || s == "yes") {
        gold[query] = true;
        continue;
      }
      if (s == "N" || s == "no") {
        gold[query] = false;
        continue;
      }
    }
    throw DataError(where + ": label for " + query + " must be Y/N, yes/no or a boolean");
  }
  return gold;
}

BinaryLabels load_binary_gold(const std::filesystem::path& path) {
  return parse_binary_gold(parse_json_file(path), path.string());
}

double f_beta(double precision, double recall, double beta) {
  const double b2 = beta * beta;
  const double den = b2 * precision + recall;
  return den == 0.0 ? 0.0 : (1.0 + b2) * precision * recall / den;
}

MicroReport micro_prf(const Selections& run, const GoldLabels& gold) {
  check_queries_in_gold(run, gold);
  MicroReport r;
  for (const auto& [query, relevant] : gold) {
    r.relevant += relevant.size();
    const auto it = run.find(query);
    if (it == run.end()) continue;
    r.retrieved += it->second.size();
    r.correct += overlap(it->second, relevant);
  }
  r.precision = ratio(r.correct, r.retrieved);
  r.recall = ratio(r.correct, r.relevant);
  r.f1 = f_beta(r.precision, r.recall, 1.0);
  return r;
}

MacroReport macro_prf2(const Selections& run, const GoldLabels& gold,
                       Unanswered unanswered) {
  check_queries_in_gold(run, gold);
  MacroReport r;
  for (const auto& [query, relevant] : gold) {
    const auto it = run.find(query);
    if (it == run.end() && unanswered == Unanswered::kSkip) continue;
    QueryPrf q;
    q.query_id = query;
    if (it != run.end()) {
      const auto correct = overlap(it->second, relevant);
      q.precision = ratio(correct, it->second.size());
      q.recall = ratio(correct, relevant.size());
      q.f2 = f_beta(q.precision, q.recall, 2.0);
    }
    r.precision += q.precision;
    r.recall += q.recall;
    r.f2 += q.f2;
    r.per_query.push_back(std::move(q));
  }
  if (!r.per_query.empty()) {
    const double n = static_cast<double>(r.per_query.size());
    r.precision /= n;
    r.recall /= n;
    r.f2 /= n;
  }
  return r;
}

std::map<std::size_t, double> recall_at_k(const RunResult& ranked, const GoldLabels& gold,
                                          std::span<const std::size_t> ks) {
  std::size_t total = 0;
  for (const auto& [_, relevant] : gold) total += relevant.size();
  std::map<std::size_t, double> out;
  for (const std::size_t k : ks) {
    if (k == 0) throw UsageError("recall@k: k must be positive");
    std::size_t hits = 0;
    for (const auto& [query, ranking] : ranked.queries) {
      const auto found = gold.find(query);
      if (found == gold.end()) continue;  // no gold items to hit
      const auto& relevant = found->second;
      const std::size_t depth = std::min(k, ranking.size());
      for (std::size_t i = 0; i < depth; ++i) hits += relevant.count(ranking[i].id);
    }
    out[k] = ratio(hits, total);
  }
  return out;
}

double accuracy(const BinaryLabels& predicted, const BinaryLabels& gold) {
  std::size_t correct = 0;
  for (const auto& [query, label] : gold) {
    const auto it = predicted.find(query);
    if (it == predicted.end()) throw DataError("no predicted label for query " + query);
    correct += it->second == label ? 1 : 0;
  }
  return ratio(correct, gold.size());
}

nlohmann::json to_json(const MicroReport& report) {
  return {{"precision", report.precision}, {"recall", report.recall},
          {"f1", report.f1},               {"correct", report.correct},
          {"retrieved", report.retrieved}, {"relevant", report.relevant}};
}

nlohmann::json to_json(const MacroReport& report) {
  nlohmann::json per_query = nlohmann::json::array();
  for (const auto& q : report.per_query) {
    per_query.push_back({{"query_id", q.query_id},
                         {"precision", q.precision},
                         {"recall", q.recall},
                         {"f2", q.f2}});
  }
  return {{"precision", report.precision},
          {"recall", report.recall},
          {"f2", report.f2},
          {"per_query", std::move(per_query)}};
}

std::string macro_csv(const MacroReport& report) {
  std::string out = "query_id,precision,recall,f2\n";
  for (const auto& q : report.per_query) {
    out += q.query_id + "," + format_double(q.precision) + "," + format_double(q.recall) +
           "," + format_double(q.f2) + "\n";
  }
  return out;
}

}  // namespace lexfuse
