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

#ifndef LEXFUSE_CORPUS_H_
#define LEXFUSE_CORPUS_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lexfuse {

struct RawDocument {
  std::string id;
  std::string body;
  std::string source_path;
  // Explicit year from the input record; overrides extraction when set.
  std::optional<int> year;
};

struct Paragraph {
  int index = 0;
  std::string text;
  bool important = false;
  bool has_suppressed = false;

  bool operator==(const Paragraph&) const = default;
};

struct ProcessedDocument {
  std::string id;
  std::optional<int> year;
  std::vector<Paragraph> paragraphs;
  std::string full_text;

  bool operator==(const ProcessedDocument&) const = default;
};

enum class CorpusKind { kCaseLaw, kStatute };

enum class CorpusLayout { kJsonl, kColieeTask1Dir, kColieeTask2Dir, kStatuteFile };

CorpusLayout parse_layout(std::string_view name);
std::string_view layout_name(CorpusLayout layout);

// Immutable after load; iteration is in ascending id order.
class CorpusStore {
 public:
  using Map = std::map<std::string, ProcessedDocument, std::less<>>;

  CorpusStore() = default;
  CorpusStore(CorpusKind kind, Map documents)
      : kind_(kind), documents_(std::move(documents)) {}

  CorpusKind kind() const { return kind_; }
  const Map& documents() const { return documents_; }
  std::size_t size() const { return documents_.size(); }
  bool empty() const { return documents_.empty(); }

  const ProcessedDocument* find(std::string_view id) const;
  // Throws DataError for an unknown id.
  const ProcessedDocument& at(std::string_view id) const;

  bool operator==(const CorpusStore&) const = default;

 private:
  CorpusKind kind_ = CorpusKind::kCaseLaw;
  Map documents_;
};

// Headings whose sections count as important, matched case-insensitively as
// a prefix of the heading text after any numbering.
struct ImportanceRules {
  std::vector<std::string> headings = {"introduction", "background",
                                       "conclusion", "decision"};
  std::string placeholder = "SUPPRESSED";
};

std::string clean_text(std::string_view raw);

// Splits on blank lines and on lines that open with a "[N]" or "N." marker,
// cleaning every fragment and dropping the empty ones.
std::vector<Paragraph> segment_paragraphs(std::string_view body);

struct StopwordRatios {
  double english = 0.0;
  double french = 0.0;
};
StopwordRatios stopword_ratios(std::string_view text);
const std::vector<std::string>& english_stopwords();
const std::vector<std::string>& french_stopwords();

std::vector<Paragraph> strip_french(std::vector<Paragraph> paragraphs);

// Largest standalone 4-digit number in [1800, 2100].
std::optional<int> extract_year(std::string_view text);
std::optional<int> extract_year(const ProcessedDocument& doc);

std::vector<Paragraph> flag_important(std::vector<Paragraph> paragraphs,
                                      const ImportanceRules& rules = {});

// Drops candidates dated strictly after the query. Undated candidates stay.
std::vector<ProcessedDocument> year_filter(
    const ProcessedDocument& query,
    const std::vector<ProcessedDocument>& candidates);
bool passes_year_filter(std::optional<int> query_year,
                        std::optional<int> candidate_year);

// Full cleaning chain for one document. The result may have no paragraphs
// (blank or all-French input); load_corpus skips those with a warning.
ProcessedDocument preprocess(const RawDocument& raw,
                             const ImportanceRules& rules = {});

CorpusStore load_corpus(const std::filesystem::path& path, CorpusLayout layout,
                        const ImportanceRules& rules = {});

// One Task 2 query directory: the decision fragment and the paragraphs of
// the relevant case, ids "<query>/<file name>".
struct EntailmentQuery {
  std::string id;
  std::string fragment;
  std::vector<std::pair<std::string, std::string>> paragraphs;
};
std::vector<EntailmentQuery> load_entailment_queries(
    const std::filesystem::path& dir);

// Short query records ({"id", "text"} per JSONL line), e.g. statute
// questions. Text is cleaned but not segmented.
struct QueryText {
  std::string id;
  std::string text;
};
std::vector<QueryText> load_queries(const std::filesystem::path& path);

}  // namespace lexfuse

#endif  // LEXFUSE_CORPUS_H_
