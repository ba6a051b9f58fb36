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

#ifndef LEXFUSE_PIPELINE_H_
#define LEXFUSE_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lexfuse/corpus.h"
#include "lexfuse/ensemble.h"
#include "lexfuse/evalkit.h"
#include "lexfuse/lexindex.h"
#include "lexfuse/run.h"
#include "lexfuse/semscore.h"

namespace lexfuse {

// Case retrieval: paragraph-level BM25 from every base-case paragraph,
// aggregated to candidate cases.
struct Task1Config {
  std::size_t per_paragraph_k = 200;
  bool use_year_in_query = false;
  bool important_only = false;
  std::size_t min_hits = 1;
  std::size_t max_cases = 200;
  // Case-level fusion with a score table; unset means lexical ranking only.
  std::optional<FusionParams> fusion;
  unsigned jobs = 1;

  void validate() const;
};

// Statute retrieval: BM25 first stage, fusion with re-ranker scores, trail
// threshold selection.
struct Task3Config {
  std::size_t train_topk = 30;
  std::size_t infer_topk = 500;
  FusionParams fusion{1.0, 0.0, 0.0};
  unsigned jobs = 1;

  void validate() const;
};

struct CandidateAggregate {
  std::string candidate_id;
  double best_score = 0.0;
  std::size_t hit_count = 0;

  bool operator==(const CandidateAggregate&) const = default;
};

// Groups paragraph hits by candidate case, keeping the best score and the
// hit count; ordered by best score descending then id.
std::vector<CandidateAggregate> aggregate_hits(
    const std::vector<std::pair<std::string, double>>& hits, std::size_t min_hits = 1);

// `index` must be a paragraph-unit index over `candidates`. A base case is
// never returned as its own candidate.
RunResult run_task1(const CorpusStore& candidates,
                    const std::vector<ProcessedDocument>& queries,
                    const InvertedIndex& index, const ScoreTable* sem_table,
                    const Task1Config& cfg, std::string run_name = "task1");

// Ranks the paragraphs of one relevant case against a decision text and
// keeps the trail-threshold selection. Without a score table the lexical
// scores alone are normalized and cut.
RunResult run_task2(const std::string& query_id, const std::string& decision,
                    const std::vector<std::pair<std::string, std::string>>& paragraphs,
                    const ScoreTable* sem_table, const FusionParams& fusion,
                    const Bm25Params& bm25 = {}, std::string run_name = "task2");
RunResult run_task2(const std::vector<EntailmentQuery>& queries, const ScoreTable* sem_table,
                    const FusionParams& fusion, const Bm25Params& bm25 = {},
                    std::string run_name = "task2", unsigned jobs = 1);

// `index` must be a document-unit index over the statute articles.
RunResult run_task3(const InvertedIndex& index, const std::vector<QueryText>& questions,
                    const ScoreTable* sem_table, const Task3Config& cfg,
                    std::string run_name = "task3");

// Plain BM25 top-k candidates per question, e.g. train_topk candidates for
// re-ranker training.
RunResult lexical_candidates(const InvertedIndex& index, const std::vector<QueryText>& questions,
                             std::size_t k, std::string run_name, unsigned jobs = 1);

enum class PairLabel { kPositive, kNegative };

struct TrainingPair {
  std::string query_id;
  std::string candidate_id;
  PairLabel label = PairLabel::kNegative;

  bool operator==(const TrainingPair&) const = default;
};

// Positives are the gold cases; negatives a seeded uniform sample of twice
// as many retrieved-but-not-gold candidates (all of them on a shortfall).
std::vector<TrainingPair> build_pairs(const std::vector<std::string>& queries,
                                      const GoldLabels& gold, const RunResult& retrieved,
                                      std::uint64_t seed);

// TSV "query_id<TAB>candidate_id<TAB>positive|negative".
std::string format_pairs(const std::vector<TrainingPair>& pairs);

}  // namespace lexfuse

#endif  // LEXFUSE_PIPELINE_H_
