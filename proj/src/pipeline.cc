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

#include "lexfuse/pipeline.h"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "lexfuse/error.h"
#include "lexfuse/log.h"
#include "lexfuse/parallel.h"

namespace lexfuse {
namespace {

ScoreVector semantic_vector(const ScoreTable& table, const std::string& query_id,
                            const ScoreVector& candidates) {
  ScoreVector sem;
  sem.reserve(candidates.size());
  for (const auto& c : candidates) sem.push_back(ScoredId{c.id, lookup(table, query_id, c.id)});
  return sem;
}

ScoreVector lexical_vector(const std::vector<ScoredCandidate>& hits) {
  ScoreVector v;
  v.reserve(hits.size());
  for (const auto& h : hits) v.push_back(ScoredId{h.candidate_id, h.score});
  return v;
}

// 64-bit FNV-1a, used to derive a per-query sampling stream.
std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

template <typename Item>
RunResult merge_queries(std::string run_name, const std::vector<Item>& items,
                        std::vector<ScoreVector> results) {
  RunResult run;
  run.name = std::move(run_name);
  for (std::size_t i = 0; i < items.size(); ++i) {
    run.queries[items[i].id] = std::move(results[i]);
  }
  run.validate();
  return run;
}

}  // namespace

void Task1Config::validate() const {
  if (per_paragraph_k < 1) throw UsageError("per_paragraph_k must be >= 1");
  if (max_cases < 1) throw UsageError("max_cases must be >= 1");
  if (min_hits < 1) throw UsageError("min_hits must be >= 1");
  if (fusion) fusion->validate();
}

void Task3Config::validate() const {
  if (train_topk < 1 || infer_topk < 1) throw UsageError("top-k values must be >= 1");
  if (train_topk > infer_topk) throw UsageError("train_topk must not exceed infer_topk");
  fusion.validate();
}

std::vector<CandidateAggregate> aggregate_hits(
    const std::vector<std::pair<std::string, double>>& hits, std::size_t min_hits) {
  std::map<std::string, CandidateAggregate> groups;
  for (const auto& [id, score] : hits) {
    auto [it, fresh] = groups.try_emplace(id, CandidateAggregate{id, score, 0});
    auto& agg = it->second;
    agg.best_score = std::max(agg.best_score, score);
    ++agg.hit_count;
  }
  std::vector<CandidateAggregate> out;
  for (auto& [_, agg] : groups) {
    if (agg.hit_count >= min_hits) out.push_back(std::move(agg));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const CandidateAggregate& a, const CandidateAggregate& b) {
                     return a.best_score > b.best_score;
                   });
  return out;
}

RunResult run_task1(const CorpusStore& candidates,
                    const std::vector<ProcessedDocument>& queries,
                    const InvertedIndex& index, const ScoreTable* sem_table,
                    const Task1Config& cfg, std::string run_name) {
  cfg.validate();
  if (index.unit() != IndexUnit::kParagraph) {
    throw UsageError("task 1 needs a paragraph-unit index");
  }
  std::vector<ScoreVector> results(queries.size());
  parallel_for(queries.size(), cfg.jobs, [&](std::size_t qi) {
    const ProcessedDocument& query = queries[qi];
    std::vector<std::pair<std::string, double>> hits;
    std::size_t usable = 0;
    for (const auto& p : query.paragraphs) {
      if (cfg.important_only && !p.important) continue;
      ++usable;
      std::string text = p.text;
      if (cfg.use_year_in_query && query.year) text += " " + std::to_string(*query.year);
      for (const auto& hit : search_topk(index, text, cfg.per_paragraph_k, query.id)) {
        const auto case_id = unit_document_id(hit.candidate_id);
        if (case_id == query.id) continue;
        hits.emplace_back(std::string(case_id), hit.score);
      }
    }
    if (usable == 0) {
      warn("query " + query.id + " has no usable paragraphs; returning no candidates");
      return;
    }

    ScoreVector lex;
    for (const auto& agg : aggregate_hits(hits, cfg.min_hits)) {
      const ProcessedDocument* doc = candidates.find(agg.candidate_id);
      if (doc == nullptr) {
        throw DataError("index unit " + agg.candidate_id + " is not in the candidate store");
      }
      if (!passes_year_filter(query.year, doc->year)) continue;
      lex.push_back(ScoredId{agg.candidate_id, agg.best_score});
    }
    if (lex.empty()) return;

    ScoreVector ranked = lex;
    if (cfg.fusion && sem_table != nullptr) {
      ranked = weighted_fuse(lex, semantic_vector(*sem_table, query.id, lex), *cfg.fusion);
    }
    sort_ranking(ranked);
    if (ranked.size() > cfg.max_cases) ranked.resize(cfg.max_cases);
    results[qi] = std::move(ranked);
  });
  return merge_queries(std::move(run_name), queries, std::move(results));
}

RunResult run_task2(const std::string& query_id, const std::string& decision,
                    const std::vector<std::pair<std::string, std::string>>& paragraphs,
                    const ScoreTable* sem_table, const FusionParams& fusion,
                    const Bm25Params& bm25, std::string run_name) {
  if (paragraphs.empty()) throw DataError("query " + query_id + " has an empty paragraph pool");
  fusion.validate();
  const auto index = InvertedIndex::build(paragraphs, IndexUnit::kDocument, bm25);
  const auto terms = index.analyzer().analyze(decision);
  ScoreVector lex;
  lex.reserve(paragraphs.size());
  for (const auto& [id, _] : paragraphs) lex.push_back(ScoredId{id, bm25_score(index, terms, id)});

  ScoreVector selected;
  if (sem_table != nullptr) {
    selected = fuse_and_select(lex, semantic_vector(*sem_table, query_id, lex), fusion);
  } else {
    selected = fuse_and_select(lex, {}, FusionParams{1.0, 0.0, fusion.trail_threshold});
  }
  RunResult run;
  run.name = std::move(run_name);
  run.queries[query_id] = std::move(selected);
  return run;
}

RunResult run_task2(const std::vector<EntailmentQuery>& queries, const ScoreTable* sem_table,
                    const FusionParams& fusion, const Bm25Params& bm25,
                    std::string run_name, unsigned jobs) {
  std::vector<ScoreVector> results(queries.size());
  parallel_for(queries.size(), jobs, [&](std::size_t i) {
    const auto& q = queries[i];
    auto run = run_task2(q.id, q.fragment, q.paragraphs, sem_table, fusion, bm25);
    results[i] = std::move(run.queries[q.id]);
  });
  return merge_queries(std::move(run_name), queries, std::move(results));
}

RunResult run_task3(const InvertedIndex& index, const std::vector<QueryText>& questions,
                    const ScoreTable* sem_table, const Task3Config& cfg,
                    std::string run_name) {
  cfg.validate();
  if (index.unit() != IndexUnit::kDocument) {
    throw UsageError("task 3 needs a document-unit index");
  }
  const FusionParams params =
      sem_table != nullptr ? cfg.fusion : FusionParams{1.0, 0.0, cfg.fusion.trail_threshold};
  std::vector<ScoreVector> results(questions.size());
  parallel_for(questions.size(), cfg.jobs, [&](std::size_t i) {
    const auto& q = questions[i];
    const ScoreVector lex = lexical_vector(search_topk(index, q.text, cfg.infer_topk, q.id));
    const ScoreVector sem =
        sem_table != nullptr ? semantic_vector(*sem_table, q.id, lex) : ScoreVector{};
    results[i] = fuse_and_select(lex, sem, params);
  });
  return merge_queries(std::move(run_name), questions, std::move(results));
}

RunResult lexical_candidates(const InvertedIndex& index, const std::vector<QueryText>& questions,
                             std::size_t k, std::string run_name, unsigned jobs) {
  std::vector<ScoreVector> results(questions.size());
  parallel_for(questions.size(), jobs, [&](std::size_t i) {
    results[i] = lexical_vector(search_topk(index, questions[i].text, k, questions[i].id));
  });
  return merge_queries(std::move(run_name), questions, std::move(results));
}

std::vector<TrainingPair> build_pairs(const std::vector<std::string>& queries,
                                      const GoldLabels& gold, const RunResult& retrieved,
                                      std::uint64_t seed) {
  std::vector<std::string> ordered = queries;
  std::sort(ordered.begin(), ordered.end());
  ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());

  std::vector<TrainingPair> pairs;
  for (const auto& query : ordered) {
    const auto run_it = retrieved.queries.find(query);
    if (run_it == retrieved.queries.end()) {
      throw DataError("query " + query + " is missing from the retrieved run");
    }
    static const std::set<std::string> kNone;
    const auto gold_it = gold.find(query);
    const auto& noticed = gold_it == gold.end() ? kNone : gold_it->second;

    for (const auto& id : noticed) pairs.push_back({query, id, PairLabel::kPositive});

    std::vector<std::string> pool;
    for (const auto& c : run_it->second) {
      if (!noticed.contains(c.id) && c.id != query) pool.push_back(c.id);
    }
    const std::size_t wanted = 2 * noticed.size();
    if (pool.size() < wanted) {
      warn("query " + query + ": only " + std::to_string(pool.size()) +
           " negatives available for " + std::to_string(wanted) + " wanted");
    }
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(fnv1a(query)),
                      static_cast<std::uint32_t>(fnv1a(query) >> 32)};
    std::mt19937_64 rng(seq);
    std::vector<std::string> negatives;
    std::sample(pool.begin(), pool.end(), std::back_inserter(negatives),
                std::min(wanted, pool.size()), rng);
    std::sort(negatives.begin(), negatives.end());
    for (auto& id : negatives) pairs.push_back({query, std::move(id), PairLabel::kNegative});
  }
  return pairs;
}

std::string format_pairs(const std::vector<TrainingPair>& pairs) {
  std::string out;
  for (const auto& p : pairs) {
    out += p.query_id + "\t" + p.candidate_id + "\t" +
           (p.label == PairLabel::kPositive ? "positive" : "negative") + "\n";
  }
  return out;
}

}  // namespace lexfuse
