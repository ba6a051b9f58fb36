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

#include "lexfuse/corpus.h"

#include <algorithm>
#include <cctype>
#include <regex>
#include <set>
#include <unordered_set>

#include "json.hpp"
#include "lexfuse/error.h"
#include "lexfuse/log.h"
#include "lexfuse/text.h"

namespace lexfuse {
namespace {

constexpr int kMinYear = 1800;
constexpr int kMaxYear = 2100;
constexpr double kMinFrenchRatio = 0.05;

bool is_collapsible_punct(char c) {
  return c == '.' || c == ',' || c == '-' || c == '_';
}

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) {
    return std::isspace(c) != 0;
  });
}

std::string normalize_newlines(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == '\r') {
      out.push_back('\n');
      if (i + 1 < raw.size() && raw[i + 1] == '\n') ++i;
    } else {
      out.push_back(raw[i]);
    }
  }
  return out;
}

// Collapses horizontal whitespace and punctuation runs within one line and
// trims it.
std::string clean_line(std::string_view line) {
  std::string spaced;
  spaced.reserve(line.size());
  for (char c : line) {
    const bool space = c == ' ' || c == '\t' || c == '\v' || c == '\f';
    if (space) {
      if (!spaced.empty() && spaced.back() != ' ') spaced.push_back(' ');
    } else {
      spaced.push_back(c);
    }
  }
  while (!spaced.empty() && spaced.back() == ' ') spaced.pop_back();

  std::string out;
  out.reserve(spaced.size());
  for (std::size_t i = 0; i < spaced.size();) {
    std::size_t j = i + 1;
    if (is_collapsible_punct(spaced[i])) {
      while (j < spaced.size() && spaced[j] == spaced[i]) ++j;
      if (j - i >= 3) {
        out.push_back(spaced[i]);
        i = j;
        continue;
      }
    }
    out.append(spaced, i, j - i);
    i = j;
  }
  return out;
}

bool is_marker_line(std::string_view line) {
  std::size_t i = 0;
  while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
  if (i >= line.size()) return false;
  const bool bracket = line[i] == '[';
  if (bracket) ++i;
  const std::size_t digits_start = i;
  while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) {
    ++i;
  }
  if (i == digits_start || i >= line.size()) return false;
  if (line[i] != (bracket ? ']' : '.')) return false;
  ++i;
  return i == line.size() || line[i] == ' ' || line[i] == '\t';
}

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Returns the heading text (numbering stripped) when `line` looks like a
// section heading: a short run of words with no sentence-final period.
std::optional<std::string> heading_text(std::string_view line) {
  static const std::regex kHeading(
      R"(^\s*(?:(?:\[\d+\]|\d+[.)]?|[IVXLCDMivxlcdm]+[.)]?|[A-Za-z][.)])\s+)?([A-Za-z][A-Za-z '&,\-]*?)\s*:?\s*$)");
  std::smatch m;
  const std::string s(line);
  if (!std::regex_match(s, m, kHeading)) return std::nullopt;
  std::string text = m[1].str();
  const auto words = std::count(text.begin(), text.end(), ' ') + 1;
  if (words > 8) return std::nullopt;
  return text;
}

bool heading_is_important(const std::string& heading,
                          const ImportanceRules& rules) {
  const std::string lower = lower_ascii(heading);
  for (const auto& key : rules.headings) {
    const std::string k = lower_ascii(key);
    if (lower.compare(0, k.size(), k) != 0) continue;
    std::size_t end = k.size();
    if (end < lower.size() && lower[end] == 's') ++end;
    if (end == lower.size() || !std::isalpha(static_cast<unsigned char>(lower[end]))) {
      return true;
    }
  }
  return false;
}

void reindex(std::vector<Paragraph>& paragraphs) {
  for (std::size_t i = 0; i < paragraphs.size(); ++i) {
    paragraphs[i].index = static_cast<int>(i);
  }
}

std::string join_paragraphs(const std::vector<Paragraph>& paragraphs) {
  std::string out;
  for (const auto& p : paragraphs) {
    if (!out.empty()) out.push_back('\n');
    out += p.text;
  }
  return out;
}

std::string where(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line);
}

struct JsonlRecord {
  std::string id;
  std::string text;
  std::optional<int> year;
  std::size_t line = 0;
};

std::vector<JsonlRecord> read_jsonl(const std::filesystem::path& path) {
  const std::string contents = read_file(path);
  std::vector<JsonlRecord> records;
  std::size_t line_no = 0;
  for (auto line : split(contents, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (is_blank(line)) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw DataError(where(path, line_no) + ": invalid JSON: " + e.what());
    }
    if (!obj.is_object()) {
      throw DataError(where(path, line_no) + ": expected a JSON object");
    }
    JsonlRecord rec;
    rec.line = line_no;
    const auto id = obj.find("id");
    if (id == obj.end() || !(id->is_string() || id->is_number_integer())) {
      throw DataError(where(path, line_no) + ": missing string field \"id\"");
    }
    rec.id = id->is_string() ? id->get<std::string>() : id->dump();
    if (rec.id.empty()) throw DataError(where(path, line_no) + ": empty id");
    const auto text = obj.find("text");
    if (text == obj.end() || !text->is_string()) {
      throw DataError(where(path, line_no) + ": missing string field \"text\"");
    }
    rec.text = text->get<std::string>();
    if (const auto year = obj.find("year"); year != obj.end() && !year->is_null()) {
      if (!year->is_number_integer()) {
        throw DataError(where(path, line_no) + ": \"year\" must be an integer or null");
      }
      const int y = year->get<int>();
      if (y < kMinYear || y > kMaxYear) {
        throw DataError(where(path, line_no) + ": year " + std::to_string(y) +
                        " outside [1800, 2100]");
      }
      rec.year = y;
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<std::filesystem::path> sorted_entries(const std::filesystem::path& dir,
                                                  bool directories) {
  std::error_code ec;
  std::filesystem::directory_iterator it(dir, ec);
  if (ec) throw DataError("cannot read directory: " + dir.string());
  std::vector<std::filesystem::path> out;
  for (const auto& entry : it) {
    if (directories ? entry.is_directory() : entry.is_regular_file()) {
      out.push_back(entry.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

CorpusLayout parse_layout(std::string_view name) {
  if (name == "jsonl") return CorpusLayout::kJsonl;
  if (name == "coliee_task1_dir") return CorpusLayout::kColieeTask1Dir;
  if (name == "coliee_task2_dir") return CorpusLayout::kColieeTask2Dir;
  if (name == "statute_file") return CorpusLayout::kStatuteFile;
  throw UsageError("unknown corpus layout: " + std::string(name));
}

std::string_view layout_name(CorpusLayout layout) {
  switch (layout) {
    case CorpusLayout::kJsonl: return "jsonl";
    case CorpusLayout::kColieeTask1Dir: return "coliee_task1_dir";
    case CorpusLayout::kColieeTask2Dir: return "coliee_task2_dir";
    case CorpusLayout::kStatuteFile: return "statute_file";
  }
  return "jsonl";
}

const ProcessedDocument* CorpusStore::find(std::string_view id) const {
  const auto it = documents_.find(id);
  return it == documents_.end() ? nullptr : &it->second;
}

const ProcessedDocument& CorpusStore::at(std::string_view id) const {
  if (const auto* doc = find(id)) return *doc;
  throw DataError("unknown document id: " + std::string(id));
}

std::string clean_text(std::string_view raw) {
  const std::string text = normalize_newlines(raw);
  std::string out;
  out.reserve(text.size());
  for (auto line : split(text, '\n')) {
    std::string cleaned = clean_line(line);
    if (cleaned.empty()) continue;
    if (!out.empty()) out.push_back('\n');
    out += cleaned;
  }
  return out;
}

std::vector<Paragraph> segment_paragraphs(std::string_view body) {
  const std::string text = normalize_newlines(body);
  std::vector<Paragraph> paragraphs;
  std::string fragment;
  auto flush = [&] {
    std::string cleaned = clean_text(fragment);
    fragment.clear();
    if (cleaned.empty()) return;
    Paragraph p;
    p.index = static_cast<int>(paragraphs.size());
    p.text = std::move(cleaned);
    paragraphs.push_back(std::move(p));
  };
  for (auto line : split(text, '\n')) {
    if (is_blank(line)) {
      flush();
      continue;
    }
    if (is_marker_line(line)) flush();
    if (!fragment.empty()) fragment.push_back('\n');
    fragment.append(line);
  }
  flush();
  if (paragraphs.empty()) {
    std::string whole = clean_text(text);
    if (!whole.empty()) paragraphs.push_back(Paragraph{0, std::move(whole), false, false});
  }
  return paragraphs;
}

const std::vector<std::string>& english_stopwords() {
  static const std::vector<std::string> kWords = {
      "the", "of", "and", "to", "in", "is", "that", "for", "it", "as",
      "was", "with", "be", "by", "on", "not", "he", "this", "are", "or",
      "his", "from", "at", "which", "but", "have", "an", "they", "were", "had",
      "been", "has", "their", "its", "would", "there", "who", "should", "shall", "any",
      "a", "these", "we"};
  return kWords;
}

const std::vector<std::string>& french_stopwords() {
  static const std::vector<std::string> kWords = {
      "le", "la", "les", "de", "des", "du", "et", "est", "un", "une",
      "dans", "pour", "que", "qui", "sur", "par", "pas", "au", "aux", "ce",
      "cette", "il", "elle", "ils", "sont", "ont", "avec", "ne", "se", "aussi",
      "sa", "ses", "leur", "nous", "vous", "en", "ou", "mais", "donc", "à",
      "été", "être", "où"};
  return kWords;
}

StopwordRatios stopword_ratios(std::string_view text) {
  static const std::unordered_set<std::string> kEnglish(english_stopwords().begin(),
                                                        english_stopwords().end());
  static const std::unordered_set<std::string> kFrench(french_stopwords().begin(),
                                                       french_stopwords().end());
  const auto tokens = tokenize(text);
  if (tokens.empty()) return {};
  std::size_t en = 0;
  std::size_t fr = 0;
  for (const auto& t : tokens) {
    en += kEnglish.count(t);
    fr += kFrench.count(t);
  }
  const double n = static_cast<double>(tokens.size());
  return {static_cast<double>(en) / n, static_cast<double>(fr) / n};
}

std::vector<Paragraph> strip_french(std::vector<Paragraph> paragraphs) {
  std::erase_if(paragraphs, [](const Paragraph& p) {
    const auto r = stopword_ratios(p.text);
    return r.french > r.english && r.french >= kMinFrenchRatio;
  });
  reindex(paragraphs);
  return paragraphs;
}

std::optional<int> extract_year(std::string_view text) {
  std::optional<int> best;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
    if (j - i == 4) {
      const int value = (text[i] - '0') * 1000 + (text[i + 1] - '0') * 100 +
                        (text[i + 2] - '0') * 10 + (text[i + 3] - '0');
      if (value >= kMinYear && value <= kMaxYear && (!best || value > *best)) {
        best = value;
      }
    }
    i = j;
  }
  return best;
}

std::optional<int> extract_year(const ProcessedDocument& doc) {
  return extract_year(doc.full_text);
}

std::vector<Paragraph> flag_important(std::vector<Paragraph> paragraphs,
                                      const ImportanceRules& rules) {
  bool in_important_section = false;
  for (auto& p : paragraphs) {
    const auto newline = p.text.find('\n');
    const std::string_view first_line =
        std::string_view(p.text).substr(0, newline);
    bool heading_only = false;
    if (const auto heading = heading_text(first_line)) {
      in_important_section = heading_is_important(*heading, rules);
      heading_only = newline == std::string::npos;
    }
    p.has_suppressed =
        !rules.placeholder.empty() && p.text.find(rules.placeholder) != std::string::npos;
    p.important = p.has_suppressed || (in_important_section && !heading_only);
  }
  return paragraphs;
}

bool passes_year_filter(std::optional<int> query_year,
                        std::optional<int> candidate_year) {
  return !query_year || !candidate_year || *candidate_year <= *query_year;
}

std::vector<ProcessedDocument> year_filter(
    const ProcessedDocument& query,
    const std::vector<ProcessedDocument>& candidates) {
  std::vector<ProcessedDocument> kept;
  for (const auto& c : candidates) {
    if (passes_year_filter(query.year, c.year)) kept.push_back(c);
  }
  return kept;
}

ProcessedDocument preprocess(const RawDocument& raw, const ImportanceRules& rules) {
  ProcessedDocument doc;
  doc.id = raw.id;
  doc.paragraphs = flag_important(strip_french(segment_paragraphs(raw.body)), rules);
  doc.full_text = join_paragraphs(doc.paragraphs);
  doc.year = raw.year ? raw.year : extract_year(doc.full_text);
  return doc;
}

CorpusStore load_corpus(const std::filesystem::path& path, CorpusLayout layout,
                        const ImportanceRules& rules) {
  std::vector<RawDocument> raws;
  switch (layout) {
    case CorpusLayout::kJsonl:
    case CorpusLayout::kStatuteFile:
      for (auto& rec : read_jsonl(path)) {
        raws.push_back(RawDocument{std::move(rec.id), std::move(rec.text),
                                   where(path, rec.line), rec.year});
      }
      break;
    case CorpusLayout::kColieeTask1Dir:
      for (const auto& file : sorted_entries(path, false)) {
        if (file.extension() != ".txt") continue;
        raws.push_back(RawDocument{file.filename().string(), read_file(file),
                                   file.string(), std::nullopt});
      }
      break;
    case CorpusLayout::kColieeTask2Dir:
      for (const auto& query_dir : sorted_entries(path, true)) {
        const auto para_dir = query_dir / "paragraphs";
        if (!std::filesystem::is_directory(para_dir)) {
          throw DataError("missing paragraphs/ directory: " + para_dir.string());
        }
        for (const auto& file : sorted_entries(para_dir, false)) {
          raws.push_back(RawDocument{
              query_dir.filename().string() + "/" + file.filename().string(),
              read_file(file), file.string(), std::nullopt});
        }
      }
      break;
  }

  CorpusStore::Map documents;
  std::set<std::string, std::less<>> seen;
  for (const auto& raw : raws) {
    if (!seen.insert(raw.id).second) {
      throw DataError("duplicate document id: " + raw.id + " (" + raw.source_path + ")");
    }
    ProcessedDocument doc = preprocess(raw, rules);
    if (doc.paragraphs.empty()) {
      warn("document " + raw.id + " has no usable paragraphs; skipped");
      continue;
    }
    documents.emplace(doc.id, std::move(doc));
  }
  if (documents.empty()) throw DataError("no documents loaded from " + path.string());
  const auto kind = layout == CorpusLayout::kStatuteFile ? CorpusKind::kStatute
                                                         : CorpusKind::kCaseLaw;
  return CorpusStore(kind, std::move(documents));
}

std::vector<EntailmentQuery> load_entailment_queries(const std::filesystem::path& dir) {
  std::vector<EntailmentQuery> queries;
  for (const auto& query_dir : sorted_entries(dir, true)) {
    EntailmentQuery q;
    q.id = query_dir.filename().string();
    q.fragment = clean_text(read_file(query_dir / "entailed_fragment.txt"));
    const auto para_dir = query_dir / "paragraphs";
    if (!std::filesystem::is_directory(para_dir)) {
      throw DataError("missing paragraphs/ directory: " + para_dir.string());
    }
    for (const auto& file : sorted_entries(para_dir, false)) {
      q.paragraphs.emplace_back(q.id + "/" + file.filename().string(),
                                clean_text(read_file(file)));
    }
    queries.push_back(std::move(q));
  }
  if (queries.empty()) throw DataError("no query directories in " + dir.string());
  return queries;
}

std::vector<QueryText> load_queries(const std::filesystem::path& path) {
  std::vector<QueryText> queries;
  std::set<std::string, std::less<>> seen;
  for (auto& rec : read_jsonl(path)) {
    if (!seen.insert(rec.id).second) {
      throw DataError(where(path, rec.line) + ": duplicate query id: " + rec.id);
    }
    queries.push_back(QueryText{std::move(rec.id), clean_text(rec.text)});
  }
  if (queries.empty()) throw DataError("no queries in " + path.string());
  std::sort(queries.begin(), queries.end(),
            [](const QueryText& a, const QueryText& b) { return a.id < b.id; });
  return queries;
}

}  // namespace lexfuse
