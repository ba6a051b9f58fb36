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

// Straight-line reference implementations used as test oracles. They share
// no code with the library beyond plain data types.

#ifndef LEXFUSE_TESTS_ORACLES_H_
#define LEXFUSE_TESTS_ORACLES_H_

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

inline std::vector<std::string> ascii_words(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

// Scores every unit against the query by recounting tf/df from raw text.
// Returns (unit id, score) for units with a positive score, ordered by score
// descending then id ascending.
inline std::vector<std::pair<std::string, double>> bm25_all(
    const std::vector<std::pair<std::string, std::string>>& units, const std::string& query,
    double k1 = 1.2, double b = 0.75) {
  std::vector<std::vector<std::string>> toks;
  double total = 0;
  for (const auto& [id, text] : units) {
    toks.push_back(ascii_words(text));
    total += static_cast<double>(toks.back().size());
  }
  const double n = static_cast<double>(units.size());
  const double avg = total / n;
  const auto q = ascii_words(query);
  const std::set<std::string> distinct(q.begin(), q.end());
  std::vector<std::pair<std::string, double>> out;
  for (std::size_t u = 0; u < units.size(); ++u) {
    double score = 0;
    for (const auto& term : distinct) {
      double tf = 0;
      for (const auto& t : toks[u]) tf += t == term ? 1 : 0;
      if (tf == 0) continue;
      double df = 0;
      for (const auto& other : toks) {
        df += std::find(other.begin(), other.end(), term) != other.end() ? 1 : 0;
      }
      const double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
      const double dl = static_cast<double>(toks[u].size());
      score += idf * tf * (k1 + 1) / (tf + k1 * (1 - b + b * dl / avg));
    }
    if (score > 0) out.emplace_back(units[u].first, score);
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    return x.second != y.second ? x.second > y.second : x.first < y.first;
  });
  return out;
}

inline std::vector<double> minmax(const std::vector<double>& x) {
  const double lo = *std::min_element(x.begin(), x.end());
  const double hi = *std::max_element(x.begin(), x.end());
  std::vector<double> out;
  for (double v : x) out.push_back(hi == lo ? 1.0 : (v - lo) / (hi - lo));
  return out;
}

// Three-step fusion over aligned score lists.
inline std::vector<double> fuse(const std::vector<double>& lex, const std::vector<double>& sem,
                                double alpha, double beta) {
  const auto l = minmax(lex);
  const auto s = minmax(sem);
  std::vector<double> pre;
  for (std::size_t i = 0; i < l.size(); ++i) pre.push_back(alpha * l[i] + beta * s[i]);
  return minmax(pre);
}

using Sets = std::map<std::string, std::set<std::string>>;

struct Micro {
  double p, r, f1;
};

inline Micro micro(const Sets& run, const Sets& gold) {
  double correct = 0, retrieved = 0, relevant = 0;
  for (const auto& [q, g] : gold) {
    relevant += static_cast<double>(g.size());
    if (!run.count(q)) continue;
    retrieved += static_cast<double>(run.at(q).size());
    for (const auto& c : run.at(q)) correct += g.count(c) ? 1 : 0;
  }
  const double p = retrieved > 0 ? correct / retrieved : 0;
  const double r = relevant > 0 ? correct / relevant : 0;
  const double f1 = p + r > 0 ? 2 * p * r / (p + r) : 0;
  return {p, r, f1};
}

struct Macro {
  double p, r, f2;
};

inline Macro macro(const Sets& run, const Sets& gold) {
  double sp = 0, sr = 0, sf = 0;
  for (const auto& [q, g] : gold) {
    double p = 0, r = 0, f = 0;
    if (run.count(q)) {
      double correct = 0;
      for (const auto& c : run.at(q)) correct += g.count(c) ? 1 : 0;
      p = run.at(q).empty() ? 0 : correct / static_cast<double>(run.at(q).size());
      r = correct / static_cast<double>(g.size());
      f = (4 * p + r) > 0 ? 5 * p * r / (4 * p + r) : 0;
    }
    sp += p;
    sr += r;
    sf += f;
  }
  const double n = static_cast<double>(gold.size());
  return {sp / n, sr / n, sf / n};
}

inline double recall_at(const std::map<std::string, std::vector<std::string>>& ranked,
                        const Sets& gold, std::size_t k) {
  double hits = 0, total = 0;
  for (const auto& [q, g] : gold) total += static_cast<double>(g.size());
  for (const auto& [q, list] : ranked) {
    for (std::size_t i = 0; i < list.size() && i < k; ++i) hits += gold.at(q).count(list[i]);
  }
  return total > 0 ? hits / total : 0;
}

inline double accuracy(const std::map<std::string, bool>& pred,
                       const std::map<std::string, bool>& gold) {
  double ok = 0;
  for (const auto& [q, y] : gold) ok += pred.at(q) == y ? 1 : 0;
  return ok / static_cast<double>(gold.size());
}

// Candidates named in at least `quorum` of the runs for one query.
inline std::set<std::string> count_votes(const std::vector<std::set<std::string>>& runs,
                                         std::size_t quorum) {
  std::set<std::string> all;
  for (const auto& r : runs) all.insert(r.begin(), r.end());
  std::set<std::string> out;
  for (const auto& c : all) {
    std::size_t n = 0;
    for (const auto& r : runs) n += r.count(c);
    if (n >= quorum) out.insert(c);
  }
  return out;
}

}  // namespace oracle

#endif  // LEXFUSE_TESTS_ORACLES_H_
