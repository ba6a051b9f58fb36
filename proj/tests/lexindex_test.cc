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

#include "lexfuse/lexindex.h"

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>

#include "fixtures.h"
#include "lexfuse/error.h"
#include "oracles.h"

namespace lexfuse {
namespace {

using Units = std::vector<std::pair<std::string, std::string>>;

const Units kTaxUnits = {{"d1", "tax evasion penalty for tax evasion"},
                         {"d2", "tax law applies to income"},
                         {"d3", "criminal law and evasion of duty"}};

void expect_matches_oracle(const InvertedIndex& index, const Units& units,
                           const std::string& query, std::size_t k) {
  auto expected = oracle::bm25_all(units, query);
  if (expected.size() > k) expected.resize(k);
  const auto got = search_topk(index, query, k);
  ASSERT_EQ(got.size(), expected.size()) << query;
  for (std::size_t i = 0; i < got.size(); ++i) {
    EXPECT_EQ(got[i].candidate_id, expected[i].first) << query << " rank " << i;
    EXPECT_NEAR(got[i].score, expected[i].second, 1e-9 * expected[i].second);
  }
}

TEST(Tokenize, SplitsOnNonAlphanumerics) {
  EXPECT_EQ(tokenize("The Court's 2015 order"),
            (std::vector<std::string>{"the", "court", "s", "2015", "order"}));
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_EQ(tokenize("a-b\u2014c"), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(tokenize("Cour d'APPEL État"),
            (std::vector<std::string>{"cour", "d", "appel", "état"}));
}

TEST(Analyzer, OptionalStopwordRemoval) {
  EXPECT_EQ(Analyzer{}.analyze("the tax of the state").size(), 5u);
  EXPECT_EQ(Analyzer{true}.analyze("the tax of the state"),
            (std::vector<std::string>{"tax", "state"}));
}

TEST(UnitIds, ParagraphNaming) {
  EXPECT_EQ(paragraph_unit_id("001.txt", 4), "001.txt#4");
  EXPECT_EQ(unit_document_id("001.txt#4"), "001.txt");
  EXPECT_EQ(unit_document_id("a#b#2"), "a#b");
  EXPECT_EQ(unit_document_id("plain"), "plain");
}

TEST(BuildIndex, CountsParagraphUnits) {
  const auto fx = fixtures::synthetic_corpus(1, 2, 3, 0);
  const auto index = build_index(fx.store, IndexUnit::kParagraph);
  EXPECT_EQ(index.n_units(), 6u);
  EXPECT_EQ(index.unit(), IndexUnit::kParagraph);
  EXPECT_TRUE(index.ordinal("doc100#2").has_value());
  EXPECT_EQ(build_index(fx.store, IndexUnit::kDocument).n_units(), 2u);
}

TEST(BuildIndex, TermFrequencyAndStatistics) {
  const auto index = InvertedIndex::build({{"a", "tax tax tax"}, {"b", "tax law"}},
                                          IndexUnit::kDocument);
  ASSERT_EQ(index.postings("tax").size(), 2u);
  EXPECT_EQ(index.postings("tax")[0], (Posting{0, 3}));
  EXPECT_EQ(index.tf("tax", 1), 1u);
  EXPECT_EQ(index.tf("law", 0), 0u);
  EXPECT_EQ(index.df("law"), 1u);
  EXPECT_EQ(index.df("absent"), 0u);
  EXPECT_DOUBLE_EQ(index.avg_len(), 2.5);
  EXPECT_EQ(index.doc_lens(), (std::vector<std::uint32_t>{3, 2}));
}

TEST(BuildIndex, RebuildIsIdentical) {
  const auto fx = fixtures::synthetic_corpus(9, 5, 4, 0);
  EXPECT_EQ(build_index(fx.store, IndexUnit::kParagraph),
            build_index(fx.store, IndexUnit::kParagraph));
}

TEST(BuildIndex, Errors) {
  EXPECT_THROW(InvertedIndex::build({}, IndexUnit::kDocument), DataError);
  EXPECT_THROW(InvertedIndex::build({{"a", "x"}, {"a", "y"}}, IndexUnit::kDocument), DataError);
  EXPECT_THROW(build_index(CorpusStore{}, IndexUnit::kDocument), DataError);
}

TEST(Bm25Score, AbsentTermScoresZero) {
  const auto index = InvertedIndex::build(kTaxUnits, IndexUnit::kDocument);
  const std::vector<std::string> q = {"unrelated"};
  EXPECT_EQ(bm25_score(index, q, "d1"), 0.0);
}

TEST(Bm25Score, SingleDocumentHandComputed) {
  const auto index = InvertedIndex::build({{"only", "tax law tax"}}, IndexUnit::kDocument);
  // idf = ln(1 + 0.5/1.5); tf = 2, dl = avg_len, so the length factor is 1:
  // score = idf * 2 * 2.2 / (2 + 1.2).
  const double idf = std::log(1.0 + 0.5 / 1.5);
  EXPECT_DOUBLE_EQ(index.idf("tax"), idf);
  EXPECT_DOUBLE_EQ(idf, 0.28768207245178085);
  const std::vector<std::string> q = {"tax"};
  EXPECT_NEAR(bm25_score(index, q, "only"), 0.39556284962119864, 1e-15);
  EXPECT_NEAR(bm25_score(index, q, "only"), idf * 2 * 2.2 / 3.2, 1e-15);
}

TEST(Bm25Score, ThreeDocumentFixture) {
  const auto index = InvertedIndex::build(kTaxUnits, IndexUnit::kDocument);
  const auto q = tokenize("tax evasion");
  // Values produced by the brute-force oracle and frozen here.
  EXPECT_NEAR(bm25_score(index, q, "d1"), 1.271474555789549, 1e-12);
  EXPECT_NEAR(bm25_score(index, q, "d2"), 0.4937678576907448, 1e-12);
  EXPECT_NEAR(bm25_score(index, q, "d3"), 0.4589591575402223, 1e-12);
  expect_matches_oracle(index, kTaxUnits, "tax evasion", 10);
}

TEST(Bm25Score, DuplicateQueryTermsCountOnce) {
  const auto index = InvertedIndex::build(kTaxUnits, IndexUnit::kDocument);
  const std::vector<std::string> once = {"tax"};
  const std::vector<std::string> twice = {"tax", "tax"};
  EXPECT_EQ(bm25_score(index, once, "d2"), bm25_score(index, twice, "d2"));
}

TEST(Bm25Score, UnknownUnitIsAnError) {
  const auto index = InvertedIndex::build(kTaxUnits, IndexUnit::kDocument);
  const std::vector<std::string> q = {"tax"};
  EXPECT_THROW(bm25_score(index, q, "d9"), DataError);
}

TEST(Bm25Score, NonNegativeAndMonotoneInTf) {
  Units units;
  for (int tf = 1; tf <= 6; ++tf) {
    std::string text;
    for (int i = 0; i < tf; ++i) text += "tax ";
    for (int i = tf; i < 6; ++i) text += "pad ";
    units.emplace_back("u" + std::to_string(tf), text);
  }
  units.emplace_back("z", "other words only here ok ok");
  const auto index = InvertedIndex::build(units, IndexUnit::kDocument);
  const std::vector<std::string> q = {"tax"};
  double prev = 0.0;
  for (int tf = 1; tf <= 6; ++tf) {
    const double s = bm25_score(index, q, "u" + std::to_string(tf));
    EXPECT_GT(s, prev);
    prev = s;
  }
  EXPECT_EQ(bm25_score(index, q, "z"), 0.0);
}

TEST(SearchTopk, KLargerThanMatches) {
  const auto index = InvertedIndex::build(kTaxUnits, IndexUnit::kDocument);
  const auto hits = search_topk(index, "criminal", 50, "q");
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0].candidate_id, "d3");
  EXPECT_EQ(hits[0].query_id, "q");
  EXPECT_EQ(hits[0].origin, ScoreOrigin::kLexical);
  EXPECT_TRUE(search_topk(index, "nothing matches", 5).empty());
  EXPECT_TRUE(search_topk(index, "", 5).empty());
  EXPECT_THROW(search_topk(index, "tax", 0), UsageError);
}

TEST(SearchTopk, TiesBrokenByUnitId) {
  const auto index = InvertedIndex::build({{"b", "same text"}, {"c", "same text"}, {"a", "same text"}},
                                          IndexUnit::kDocument);
  const auto hits = search_topk(index, "same", 2);
  ASSERT_EQ(hits.size(), 2u);
  EXPECT_EQ(hits[0].candidate_id, "a");
  EXPECT_EQ(hits[1].candidate_id, "b");
  EXPECT_EQ(hits[0].score, hits[1].score);
}

TEST(SearchTopk, MatchesBruteForceOnFiftyUnits) {
  const auto fx = fixtures::synthetic_corpus(42, 10, 5, 30, 60);
  const auto index = InvertedIndex::build(fx.paragraph_units, IndexUnit::kParagraph);
  for (const auto& q : fx.queries) {
    for (std::size_t k : {1u, 7u, 50u}) expect_matches_oracle(index, fx.paragraph_units, q, k);
  }
}

TEST(SearchTopk, CustomParamsMatchOracle) {
  const auto fx = fixtures::synthetic_corpus(43, 6, 4, 10, 40);
  const Bm25Params params{0.9, 0.4};
  const auto index = InvertedIndex::build(fx.paragraph_units, IndexUnit::kParagraph, params);
  for (const auto& q : fx.queries) {
    auto expected = oracle::bm25_all(fx.paragraph_units, q, 0.9, 0.4);
    const auto got = search_topk(index, q, 1000);
    ASSERT_EQ(got.size(), expected.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_EQ(got[i].candidate_id, expected[i].first);
      EXPECT_NEAR(got[i].score, expected[i].second, 1e-9 * expected[i].second);
    }
  }
}

TEST(Snapshot, RoundTrip) {
  const auto fx = fixtures::synthetic_corpus(5, 4, 3, 0);
  const auto index = build_index(fx.store, IndexUnit::kParagraph, {1.5, 0.6}, Analyzer{true});
  const auto bytes = index.serialize();
  const auto back = InvertedIndex::deserialize(bytes);
  EXPECT_EQ(back, index);
  EXPECT_EQ(back.serialize(), bytes);

  fixtures::TempDir dir;
  index.save(dir / "index.bin");
  EXPECT_EQ(InvertedIndex::load(dir / "index.bin"), index);
}

TEST(Snapshot, RejectsCorruptInput) {
  const auto bytes = InvertedIndex::build(kTaxUnits, IndexUnit::kDocument).serialize();
  EXPECT_THROW(InvertedIndex::deserialize("not an index"), DataError);
  EXPECT_THROW(InvertedIndex::deserialize(bytes.substr(0, bytes.size() / 2)), DataError);
  EXPECT_THROW(InvertedIndex::deserialize(bytes + "x"), DataError);
  std::string wrong_version = bytes;
  wrong_version[8] = 9;
  EXPECT_THROW(InvertedIndex::deserialize(wrong_version), DataError);
  fixtures::TempDir dir;
  EXPECT_THROW(InvertedIndex::load(dir / "missing.bin"), DataError);
}

TEST(LexicalScorer, ScoresKnownQueriesOnly) {
  const auto index = InvertedIndex::build(kTaxUnits, IndexUnit::kDocument);
  const std::map<std::string, std::string, std::less<>> queries = {{"q", "tax evasion"}};
  const LexicalScorer scorer(index, queries);
  EXPECT_NEAR(*scorer.score("q", "d1"), 1.271474555789549, 1e-12);
  EXPECT_FALSE(scorer.score("other", "d1").has_value());
  EXPECT_FALSE(scorer.score("q", "d9").has_value());
}

TEST(SearchTopk, ParagraphCorpusMeetsLatencyBudget) {
  const auto fx = fixtures::synthetic_corpus(7, 40, 5, 50);
  const auto start = std::chrono::steady_clock::now();
  const auto index = InvertedIndex::build(fx.paragraph_units, IndexUnit::kParagraph);
  for (const auto& q : fx.queries) search_topk(index, q, 20);
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(5));
}

}  // namespace
}  // namespace lexfuse
