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

#ifndef LEXFUSE_LEXINDEX_H_
#define LEXFUSE_LEXINDEX_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lexfuse/corpus.h"
#include "lexfuse/scorer.h"
#include "lexfuse/text.h"

namespace lexfuse {

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;

  bool operator==(const Bm25Params&) const = default;
};

enum class IndexUnit : std::uint8_t { kDocument = 0, kParagraph = 1 };

IndexUnit parse_index_unit(std::string_view name);
std::string_view index_unit_name(IndexUnit unit);

// Analysis applied to both indexed text and query text. The default is the
// plain tokenizer; English stopword removal can be switched on.
struct Analyzer {
  bool remove_stopwords = false;

  std::vector<std::string> analyze(std::string_view text) const;
  bool operator==(const Analyzer&) const = default;
};

struct Posting {
  std::uint32_t unit = 0;  // ordinal into InvertedIndex::unit_ids()
  std::uint32_t tf = 0;

  bool operator==(const Posting&) const = default;
};

enum class ScoreOrigin { kLexical, kSemantic, kFused };

struct ScoredCandidate {
  std::string query_id;
  std::string candidate_id;
  double score = 0.0;
  ScoreOrigin origin = ScoreOrigin::kLexical;
};

// Unit id used for paragraph-level indexing.
std::string paragraph_unit_id(std::string_view doc_id, int paragraph_index);
// Inverse of paragraph_unit_id: the document part of "<doc_id>#<n>".
std::string_view unit_document_id(std::string_view unit_id);

// Term -> postings index with the statistics BM25 needs. Units are numbered
// by their position in the sorted unit id list, so posting order equals
// ascending unit id order. Immutable once built.
class InvertedIndex {
 public:
  // `units` holds (unit id, text) pairs; ids must be unique.
  static InvertedIndex build(std::vector<std::pair<std::string, std::string>> units,
                             IndexUnit unit, Bm25Params params = {},
                             Analyzer analyzer = {});

  IndexUnit unit() const { return unit_; }
  const Bm25Params& params() const { return params_; }
  const Analyzer& analyzer() const { return analyzer_; }
  std::size_t n_units() const { return unit_ids_.size(); }
  std::size_t n_terms() const { return postings_.size(); }
  double avg_len() const { return avg_len_; }
  const std::vector<std::string>& unit_ids() const { return unit_ids_; }
  const std::vector<std::uint32_t>& doc_lens() const { return doc_len_; }

  std::optional<std::uint32_t> ordinal(std::string_view unit_id) const;
  std::span<const Posting> postings(std::string_view term) const;
  std::size_t df(std::string_view term) const { return postings(term).size(); }
  // Term frequency of `term` in the unit with the given ordinal.
  std::uint32_t tf(std::string_view term, std::uint32_t unit) const;
  double idf(std::string_view term) const;
  // Lucene-style idf, ln(1 + (n - df + 0.5) / (df + 0.5)).
  static double idf(std::size_t n_units, std::size_t df);

  const std::map<std::string, std::vector<Posting>, std::less<>>& terms() const {
    return postings_;
  }

  // Versioned binary snapshot. serialize(deserialize(b)) == b.
  std::string serialize() const;
  static InvertedIndex deserialize(std::string_view bytes);
  void save(const std::filesystem::path& path) const;
  static InvertedIndex load(const std::filesystem::path& path);

  bool operator==(const InvertedIndex&) const = default;

 private:
  IndexUnit unit_ = IndexUnit::kDocument;
  Bm25Params params_;
  Analyzer analyzer_;
  std::vector<std::string> unit_ids_;
  std::vector<std::uint32_t> doc_len_;
  double avg_len_ = 0.0;
  std::map<std::string, std::vector<Posting>, std::less<>> postings_;
};

InvertedIndex build_index(const CorpusStore& store, IndexUnit unit,
                          Bm25Params params = {}, Analyzer analyzer = {});

// Okapi BM25 over the distinct terms of `query_terms`. Throws DataError for
// an unknown unit id.
double bm25_score(const InvertedIndex& index,
                  std::span<const std::string> query_terms,
                  std::string_view unit_id);

// Units with positive score, ordered by (score desc, unit id asc), at most k.
std::vector<ScoredCandidate> search_topk(const InvertedIndex& index,
                                         std::string_view query_text,
                                         std::size_t k,
                                         std::string_view query_id = {});

// Scores (query, unit) pairs with BM25 given the query texts.
class LexicalScorer : public Scorer {
 public:
  LexicalScorer(const InvertedIndex& index,
                const std::map<std::string, std::string, std::less<>>& query_texts);

  std::optional<double> score(std::string_view query_id,
                              std::string_view candidate_id) const override;

 private:
  const InvertedIndex& index_;
  std::map<std::string, std::vector<std::string>, std::less<>> query_terms_;
};

}  // namespace lexfuse

#endif  // LEXFUSE_LEXINDEX_H_
