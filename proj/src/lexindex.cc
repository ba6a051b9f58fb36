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

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "lexfuse/error.h"

namespace lexfuse {
namespace {

constexpr char kMagic[8] = {'L', 'X', 'F', 'I', 'D', 'X', '0', '1'};
constexpr std::uint32_t kSnapshotVersion = 1;

class Writer {
 public:
  void bytes(const void* data, std::size_t n) {
    out_.append(static_cast<const char*>(data), n);
  }
  void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    bytes(s.data(), s.size());
  }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}

  std::string_view bytes(std::size_t n) {
    if (in_.size() - pos_ < n) throw DataError("index snapshot truncated");
    auto out = in_.substr(pos_, n);
    pos_ += n;
    return out;
  }
  std::uint8_t u8() { return static_cast<std::uint8_t>(bytes(1)[0]); }
  std::uint32_t u32() {
    const auto b = bytes(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{static_cast<std::uint8_t>(b[i])} << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    const auto b = bytes(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t{static_cast<std::uint8_t>(b[i])} << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() { return std::string(bytes(u32())); }
  bool done() const { return pos_ == in_.size(); }

 private:
  std::string_view in_;
  std::size_t pos_ = 0;
};

double mean_length(const std::vector<std::uint32_t>& lens) {
  const double total = std::accumulate(lens.begin(), lens.end(), 0.0);
  return total / static_cast<double>(lens.size());
}

std::vector<std::string> distinct_terms(std::span<const std::string> terms) {
  std::set<std::string> unique(terms.begin(), terms.end());
  return {unique.begin(), unique.end()};
}

double term_weight(double idf, double tf, double dl, double avg_len,
                   const Bm25Params& p) {
  const double norm = avg_len > 0.0 ? dl / avg_len : 0.0;
  return idf * tf * (p.k1 + 1.0) / (tf + p.k1 * (1.0 - p.b + p.b * norm));
}

}  // namespace

IndexUnit parse_index_unit(std::string_view name) {
  if (name == "document") return IndexUnit::kDocument;
  if (name == "paragraph") return IndexUnit::kParagraph;
  throw UsageError("unknown index unit: " + std::string(name));
}

std::string_view index_unit_name(IndexUnit unit) {
  return unit == IndexUnit::kParagraph ? "paragraph" : "document";
}

std::vector<std::string> Analyzer::analyze(std::string_view text) const {
  auto tokens = tokenize(text);
  if (remove_stopwords) {
    static const std::unordered_set<std::string> kStop(english_stopwords().begin(),
                                                       english_stopwords().end());
    std::erase_if(tokens, [](const std::string& t) { return kStop.count(t) > 0; });
  }
  return tokens;
}

std::string paragraph_unit_id(std::string_view doc_id, int paragraph_index) {
  return std::string(doc_id) + "#" + std::to_string(paragraph_index);
}

std::string_view unit_document_id(std::string_view unit_id) {
  const auto hash = unit_id.rfind('#');
  return hash == std::string_view::npos ? unit_id : unit_id.substr(0, hash);
}

InvertedIndex InvertedIndex::build(
    std::vector<std::pair<std::string, std::string>> units, IndexUnit unit,
    Bm25Params params, Analyzer analyzer) {
  if (units.empty()) throw DataError("cannot build an index over zero units");
  if (params.k1 < 0.0 || params.b < 0.0 || params.b > 1.0) {
    throw UsageError("BM25 parameters out of range (k1 >= 0, 0 <= b <= 1)");
  }
  std::sort(units.begin(), units.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < units.size(); ++i) {
    if (units[i].first == units[i - 1].first) {
      throw DataError("duplicate unit id: " + units[i].first);
    }
  }

  InvertedIndex index;
  index.unit_ = unit;
  index.params_ = params;
  index.analyzer_ = analyzer;
  index.unit_ids_.reserve(units.size());
  index.doc_len_.reserve(units.size());
  std::unordered_map<std::string, std::vector<Posting>> postings;
  for (std::size_t ordinal = 0; ordinal < units.size(); ++ordinal) {
    const auto tokens = analyzer.analyze(units[ordinal].second);
    std::unordered_map<std::string, std::uint32_t> counts;
    for (const auto& t : tokens) ++counts[t];
    for (auto& [term, tf] : counts) {
      postings[term].push_back(Posting{static_cast<std::uint32_t>(ordinal), tf});
    }
    index.unit_ids_.push_back(std::move(units[ordinal].first));
    index.doc_len_.push_back(static_cast<std::uint32_t>(tokens.size()));
  }
  index.avg_len_ = mean_length(index.doc_len_);
  for (auto& [term, list] : postings) {
    index.postings_.emplace(term, std::move(list));
  }
  return index;
}

std::optional<std::uint32_t> InvertedIndex::ordinal(std::string_view unit_id) const {
  const auto it = std::lower_bound(unit_ids_.begin(), unit_ids_.end(), unit_id);
  if (it == unit_ids_.end() || *it != unit_id) return std::nullopt;
  return static_cast<std::uint32_t>(it - unit_ids_.begin());
}

std::span<const Posting> InvertedIndex::postings(std::string_view term) const {
  const auto it = postings_.find(term);
  if (it == postings_.end()) return {};
  return it->second;
}

std::uint32_t InvertedIndex::tf(std::string_view term, std::uint32_t unit) const {
  const auto list = postings(term);
  const auto it = std::lower_bound(
      list.begin(), list.end(), unit,
      [](const Posting& p, std::uint32_t u) { return p.unit < u; });
  return it != list.end() && it->unit == unit ? it->tf : 0;
}

double InvertedIndex::idf(std::size_t n_units, std::size_t df) {
  const double n = static_cast<double>(n_units);
  const double d = static_cast<double>(df);
  return std::log(1.0 + (n - d + 0.5) / (d + 0.5));
}

double InvertedIndex::idf(std::string_view term) const {
  return idf(n_units(), df(term));
}

std::string InvertedIndex::serialize() const {
  Writer w;
  w.bytes(kMagic, sizeof(kMagic));
  w.u32(kSnapshotVersion);
  w.u8(static_cast<std::uint8_t>(unit_));
  w.u8(analyzer_.remove_stopwords ? 1 : 0);
  w.f64(params_.k1);
  w.f64(params_.b);
  w.u64(unit_ids_.size());
  for (std::size_t i = 0; i < unit_ids_.size(); ++i) {
    w.str(unit_ids_[i]);
    w.u32(doc_len_[i]);
  }
  w.f64(avg_len_);
  w.u64(postings_.size());
  for (const auto& [term, list] : postings_) {
    w.str(term);
    w.u32(static_cast<std::uint32_t>(list.size()));
    for (const auto& p : list) {
      w.u32(p.unit);
      w.u32(p.tf);
    }
  }
  return w.take();
}

InvertedIndex InvertedIndex::deserialize(std::string_view bytes) {
  Reader r(bytes);
  if (r.bytes(sizeof(kMagic)) != std::string_view(kMagic, sizeof(kMagic))) {
    throw DataError("not an index snapshot (bad magic)");
  }
  if (const auto version = r.u32(); version != kSnapshotVersion) {
    throw DataError("unsupported index snapshot version " + std::to_string(version));
  }
  InvertedIndex index;
  const auto unit = r.u8();
  if (unit > 1) throw DataError("index snapshot: bad unit tag");
  index.unit_ = static_cast<IndexUnit>(unit);
  index.analyzer_.remove_stopwords = r.u8() != 0;
  index.params_.k1 = r.f64();
  index.params_.b = r.f64();
  const auto n_units = r.u64();
  if (n_units == 0) throw DataError("index snapshot: zero units");
  for (std::uint64_t i = 0; i < n_units; ++i) {
    index.unit_ids_.push_back(r.str());
    index.doc_len_.push_back(r.u32());
    if (i > 0 && !(index.unit_ids_[i - 1] < index.unit_ids_[i])) {
      throw DataError("index snapshot: unit ids not strictly sorted");
    }
  }
  index.avg_len_ = r.f64();
  if (index.avg_len_ != mean_length(index.doc_len_)) {
    throw DataError("index snapshot: average length does not match unit lengths");
  }
  const auto n_terms = r.u64();
  std::string previous;
  for (std::uint64_t t = 0; t < n_terms; ++t) {
    std::string term = r.str();
    if (t > 0 && !(previous < term)) {
      throw DataError("index snapshot: term dictionary not strictly sorted");
    }
    const auto count = r.u32();
    std::vector<Posting> list;
    list.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
      Posting p{r.u32(), r.u32()};
      if (p.unit >= n_units || p.tf == 0 || (!list.empty() && list.back().unit >= p.unit)) {
        throw DataError("index snapshot: corrupt postings for term " + term);
      }
      list.push_back(p);
    }
    previous = term;
    index.postings_.emplace(std::move(term), std::move(list));
  }
  if (!r.done()) throw DataError("index snapshot: trailing bytes");
  return index;
}

void InvertedIndex::save(const std::filesystem::path& path) const {
  write_file(path, serialize());
}

InvertedIndex InvertedIndex::load(const std::filesystem::path& path) {
  try {
    return deserialize(read_file(path));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

InvertedIndex build_index(const CorpusStore& store, IndexUnit unit,
                          Bm25Params params, Analyzer analyzer) {
  if (store.empty()) throw DataError("cannot index an empty corpus");
  std::vector<std::pair<std::string, std::string>> units;
  for (const auto& [id, doc] : store.documents()) {
    if (unit == IndexUnit::kDocument) {
      units.emplace_back(id, doc.full_text);
    } else {
      for (const auto& p : doc.paragraphs) {
        units.emplace_back(paragraph_unit_id(id, p.index), p.text);
      }
    }
  }
  return InvertedIndex::build(std::move(units), unit, params, analyzer);
}

double bm25_score(const InvertedIndex& index, std::span<const std::string> query_terms,
                  std::string_view unit_id) {
  const auto ordinal = index.ordinal(unit_id);
  if (!ordinal) throw DataError("unknown unit id: " + std::string(unit_id));
  const double dl = index.doc_lens()[*ordinal];
  double score = 0.0;
  for (const auto& term : distinct_terms(query_terms)) {
    const auto tf = index.tf(term, *ordinal);
    if (tf == 0) continue;
    score += term_weight(index.idf(term), tf, dl, index.avg_len(), index.params());
  }
  return score;
}

std::vector<ScoredCandidate> search_topk(const InvertedIndex& index,
                                         std::string_view query_text, std::size_t k,
                                         std::string_view query_id) {
  if (k == 0) throw UsageError("search_topk: k must be positive");
  const auto terms = distinct_terms(index.analyzer().analyze(query_text));
  std::vector<double> acc(index.n_units(), 0.0);
  for (const auto& term : terms) {
    const auto list = index.postings(term);
    if (list.empty()) continue;
    const double idf = InvertedIndex::idf(index.n_units(), list.size());
    for (const auto& p : list) {
      acc[p.unit] += term_weight(idf, p.tf, index.doc_lens()[p.unit], index.avg_len(),
                                 index.params());
    }
  }
  std::vector<std::uint32_t> hits;
  for (std::uint32_t u = 0; u < acc.size(); ++u) {
    if (acc[u] > 0.0) hits.push_back(u);
  }
  const auto before = [&](std::uint32_t a, std::uint32_t b) {
    return acc[a] != acc[b] ? acc[a] > acc[b] : a < b;
  };
  const std::size_t keep = std::min(k, hits.size());
  std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(keep),
                    hits.end(), before);
  std::vector<ScoredCandidate> out;
  out.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    out.push_back(ScoredCandidate{std::string(query_id), index.unit_ids()[hits[i]],
                                  acc[hits[i]], ScoreOrigin::kLexical});
  }
  return out;
}

LexicalScorer::LexicalScorer(
    const InvertedIndex& index,
    const std::map<std::string, std::string, std::less<>>& query_texts)
    : index_(index) {
  for (const auto& [id, text] : query_texts) {
    query_terms_.emplace(id, index.analyzer().analyze(text));
  }
}

std::optional<double> LexicalScorer::score(std::string_view query_id,
                                           std::string_view candidate_id) const {
  const auto q = query_terms_.find(query_id);
  if (q == query_terms_.end() || !index_.ordinal(candidate_id)) return std::nullopt;
  return bm25_score(index_, q->second, candidate_id);
}

}  // namespace lexfuse
