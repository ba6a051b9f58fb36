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

// Seeded synthetic corpora and small filesystem helpers shared by the tests.

#ifndef LEXFUSE_TESTS_FIXTURES_H_
#define LEXFUSE_TESTS_FIXTURES_H_

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <unistd.h>
#include <utility>
#include <vector>

#include "json.hpp"
#include "lexfuse/corpus.h"
#include "lexfuse/evalkit.h"

namespace fixtures {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = fs::temp_directory_path() /
            ("lexfuse_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

inline void write(const fs::path& path, const std::string& contents) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << contents;
}

inline std::size_t pick(std::mt19937_64& rng, std::size_t n) { return rng() % n; }

// Words w0..w{n-1} drawn with a skew towards low indices so that document
// frequencies vary.
inline std::string skewed_word(std::mt19937_64& rng, std::size_t vocab) {
  const std::size_t a = pick(rng, vocab);
  const std::size_t b = pick(rng, vocab);
  return "w" + std::to_string(std::min(a, b));
}

inline std::string random_text(std::mt19937_64& rng, std::size_t min_words,
                               std::size_t max_words, std::size_t vocab) {
  const std::size_t n = min_words + pick(rng, max_words - min_words + 1);
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out += ' ';
    out += skewed_word(rng, vocab);
  }
  return out;
}

// `docs` documents of `paras` paragraphs each; paragraph texts are also
// returned as (unit id, text) pairs in the paragraph-index naming scheme.
struct SyntheticCorpus {
  lexfuse::CorpusStore store;
  std::vector<std::pair<std::string, std::string>> paragraph_units;
  std::vector<std::string> queries;
};

inline SyntheticCorpus synthetic_corpus(std::uint64_t seed, std::size_t docs,
                                        std::size_t paras, std::size_t n_queries,
                                        std::size_t vocab = 300) {
  std::mt19937_64 rng(seed);
  lexfuse::CorpusStore::Map map;
  SyntheticCorpus out;
  for (std::size_t d = 0; d < docs; ++d) {
    lexfuse::ProcessedDocument doc;
    doc.id = "doc" + std::to_string(100 + d);
    for (std::size_t p = 0; p < paras; ++p) {
      lexfuse::Paragraph para;
      para.index = static_cast<int>(p);
      para.text = random_text(rng, 8, 40, vocab);
      out.paragraph_units.emplace_back(doc.id + "#" + std::to_string(p), para.text);
      if (!doc.full_text.empty()) doc.full_text += '\n';
      doc.full_text += para.text;
      doc.paragraphs.push_back(std::move(para));
    }
    map.emplace(doc.id, std::move(doc));
  }
  for (std::size_t q = 0; q < n_queries; ++q) out.queries.push_back(random_text(rng, 2, 8, vocab));
  out.store = lexfuse::CorpusStore(lexfuse::CorpusKind::kCaseLaw, std::move(map));
  return out;
}

// Statute articles that each carry one unique rare term plus distinct filler
// words; each question repeats its article's rare term and two of that
// article's filler words.
struct StatuteFixture {
  std::vector<std::pair<std::string, std::string>> articles;
  std::vector<lexfuse::QueryText> questions;
  lexfuse::GoldLabels gold;
};

inline StatuteFixture statute_fixture(std::uint64_t seed, std::size_t n_articles = 100,
                                      std::size_t n_questions = 20) {
  std::mt19937_64 rng(seed);
  StatuteFixture fx;
  std::vector<std::vector<std::string>> fillers(n_articles);
  for (std::size_t a = 0; a < n_articles; ++a) {
    std::vector<std::string> pool;
    for (int w = 0; w < 60; ++w) pool.push_back("civil" + std::to_string(w));
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(20);
    fillers[a] = pool;
    std::string text = "rareterm" + std::to_string(a);
    for (const auto& w : pool) text += " " + w;
    fx.articles.emplace_back("art" + std::to_string(1000 + a), text);
  }
  for (std::size_t q = 0; q < n_questions; ++q) {
    const std::size_t target = (q * 37 + 11) % n_articles;
    const auto& f = fillers[target];
    std::string text = f[pick(rng, f.size())] + " rareterm" + std::to_string(target) + " " +
                       f[pick(rng, f.size())];
    const std::string id = "H30-" + std::to_string(q);
    fx.questions.push_back({id, text});
    fx.gold[id] = {fx.articles[target].first};
  }
  return fx;
}

inline std::string statute_jsonl(const std::vector<std::pair<std::string, std::string>>& arts) {
  std::string out;
  for (const auto& [id, text] : arts) out += nlohmann::json{{"id", id}, {"text", text}}.dump() + "\n";
  return out;
}

inline std::string questions_jsonl(const std::vector<lexfuse::QueryText>& qs) {
  std::string out;
  for (const auto& q : qs) out += nlohmann::json{{"id", q.id}, {"text", q.text}}.dump() + "\n";
  return out;
}

inline std::string gold_json(const lexfuse::GoldLabels& gold) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [q, set] : gold) j[q] = std::vector<std::string>(set.begin(), set.end());
  return j.dump(2);
}

// Case-law fixture for the important-paragraph experiment. Every base case
// has a "Background" section whose paragraph shares rare terms with its two
// relevant cases, plus long "Analysis" paragraphs copied almost verbatim
// into many distractor cases.
struct CaseFixture {
  lexfuse::CorpusStore candidates;
  std::vector<lexfuse::ProcessedDocument> queries;
  lexfuse::GoldLabels gold;
};

inline CaseFixture case_fixture(std::uint64_t seed, std::size_t n_queries = 6) {
  std::mt19937_64 rng(seed);
  std::vector<lexfuse::RawDocument> raws;
  CaseFixture fx;
  std::size_t next_id = 0;
  auto new_id = [&] {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%06zu.txt", next_id++);
    return std::string(buf);
  };
  for (std::size_t q = 0; q < n_queries; ++q) {
    const std::string tag = "q" + std::to_string(q);
    const std::string rare = "ratio" + tag + "alpha ratio" + tag + "beta";
    std::string noise;
    for (int n = 0; n < 3; ++n) {
      noise += "\n\n[" + std::to_string(n + 3) + "] " + random_text(rng, 40, 50, 80) +
               " noise" + tag + "x" + std::to_string(n);
    }
    const std::string query_id = "base_" + tag + ".txt";
    const std::string body = "I. Introduction\n[1] The applicant seeks review in 2019 of the " +
                             rare + " determination.\n\nII. Background\n[2] The " + rare +
                             " doctrine governs the " + rare + " claim.\n\nIII. Analysis" + noise;
    lexfuse::RawDocument raw{query_id, body, "", std::nullopt};
    fx.queries.push_back(lexfuse::preprocess(raw));

    for (int r = 0; r < 2; ++r) {
      const std::string id = new_id();
      raws.push_back({id,
                      "[1] " + random_text(rng, 30, 40, 80) + " " + rare + " in 2011.\n\n[2] " +
                          random_text(rng, 30, 40, 80),
                      "", std::nullopt});
      fx.gold[query_id].insert(id);
    }
    // Distractors: each echoes one noise paragraph of the base case.
    const auto& paras = fx.queries.back().paragraphs;
    for (int d = 0; d < 12; ++d) {
      const auto& src = paras[paras.size() - 1 - static_cast<std::size_t>(d % 3)].text;
      raws.push_back({new_id(), src + "\n\n[2] " + random_text(rng, 20, 30, 80), "", std::nullopt});
    }
  }
  lexfuse::CorpusStore::Map map;
  for (const auto& raw : raws) {
    auto doc = lexfuse::preprocess(raw);
    map.emplace(doc.id, std::move(doc));
  }
  fx.candidates = lexfuse::CorpusStore(lexfuse::CorpusKind::kCaseLaw, std::move(map));
  return fx;
}

}  // namespace fixtures

#endif  // LEXFUSE_TESTS_FIXTURES_H_
