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

#include "lexfuse/ensemble.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "lexfuse/error.h"
#include "lexfuse/log.h"
#include "lexfuse/parallel.h"
#include "lexfuse/text.h"

namespace lexfuse {
namespace {

void check_unique(const ScoreVector& v, std::string_view side) {
  std::unordered_set<std::string_view> seen;
  for (const auto& c : v) {
    if (!seen.insert(c.id).second) {
      throw DataError(std::string(side) + " scores list candidate " + c.id + " twice");
    }
    if (!std::isfinite(c.score)) {
      throw DataError(std::string(side) + " score for " + c.id + " is not finite");
    }
  }
}

std::string describe(const std::set<std::string>& ids) {
  std::string out;
  for (const auto& id : ids) {
    if (!out.empty()) out += ", ";
    out += id;
  }
  return out;
}

template <typename Run>
void check_same_queries(const std::vector<Run>& runs) {
  if (runs.empty()) throw UsageError("majority_vote needs at least one run");
  for (std::size_t r = 1; r < runs.size(); ++r) {
    std::set<std::string> diff;
    for (const auto& [q, _] : runs[0]) {
      if (!runs[r].contains(q)) diff.insert(q);
    }
    for (const auto& [q, _] : runs[r]) {
      if (!runs[0].contains(q)) diff.insert(q);
    }
    if (!diff.empty()) {
      throw DataError("runs 0 and " + std::to_string(r) +
                      " cover different queries: " + describe(diff));
    }
  }
}

}  // namespace

void FusionParams::validate() const {
  if (!(alpha >= 0.0) || !(beta >= 0.0) || !(alpha + beta > 0.0)) {
    throw UsageError("fusion weights need alpha >= 0, beta >= 0 and alpha + beta > 0");
  }
  if (!(trail_threshold >= 0.0 && trail_threshold <= 1.0)) {
    throw UsageError("trail_threshold must lie in [0, 1]");
  }
}

ScoreVector minmax_normalize(const ScoreVector& v) {
  if (v.empty()) throw DataError("cannot normalize an empty score vector");
  const auto [lo, hi] = std::minmax_element(
      v.begin(), v.end(), [](const ScoredId& a, const ScoredId& b) { return a.score < b.score; });
  const double min = lo->score;
  const double span = hi->score - min;
  ScoreVector out = v;
  for (auto& c : out) c.score = span == 0.0 ? 1.0 : (c.score - min) / span;
  return out;
}

ScoreVector weighted_fuse(const ScoreVector& lex, const ScoreVector& sem,
                          const FusionParams& params) {
  params.validate();
  if (lex.empty()) throw DataError("weighted_fuse: lexical scores are empty");
  check_unique(lex, "lexical");
  check_unique(sem, "semantic");

  std::unordered_map<std::string_view, std::size_t> slot;
  ScoreVector lex_full;
  ScoreVector sem_full;
  for (const auto& c : lex) {
    slot.emplace(c.id, lex_full.size());
    lex_full.push_back(c);
    sem_full.push_back(ScoredId{c.id, 0.0});
  }
  for (const auto& c : sem) {
    const auto it = slot.find(c.id);
    if (it != slot.end()) {
      sem_full[it->second].score = c.score;
    } else {
      slot.emplace(c.id, lex_full.size());
      lex_full.push_back(ScoredId{c.id, 0.0});
      sem_full.push_back(c);
    }
  }

  const ScoreVector lex_norm = minmax_normalize(lex_full);
  const ScoreVector sem_norm = minmax_normalize(sem_full);
  ScoreVector fused = lex_norm;
  for (std::size_t i = 0; i < fused.size(); ++i) {
    fused[i].score = params.alpha * lex_norm[i].score + params.beta * sem_norm[i].score;
  }
  return minmax_normalize(fused);
}

ScoreVector trail_select_scored(const ScoreVector& normalized, double threshold) {
  if (normalized.empty()) return {};
  double highest = normalized.front().score;
  for (const auto& c : normalized) highest = std::max(highest, c.score);
  ScoreVector out;
  for (const auto& c : normalized) {
    const bool keep = highest > 0.0 ? (highest - c.score) / highest <= threshold
                                    : c.score == highest;
    if (keep) out.push_back(c);
  }
  sort_ranking(out);
  return out;
}

std::vector<std::string> trail_select(const ScoreVector& normalized, double threshold) {
  std::vector<std::string> ids;
  for (auto& c : trail_select_scored(normalized, threshold)) ids.push_back(std::move(c.id));
  return ids;
}

ScoreVector fuse_and_select(const ScoreVector& lex, const ScoreVector& sem,
                            const FusionParams& params) {
  if (lex.empty()) return {};
  return trail_select_scored(weighted_fuse(lex, sem, params), params.trail_threshold);
}

std::vector<std::string> cascade(const CascadeSpec& spec, std::string_view query_id,
                                 const std::vector<std::string>& initial) {
  if (spec.empty()) throw UsageError("cascade needs at least one stage");
  for (const auto& stage : spec) {
    if (!stage.scorer) throw UsageError("cascade stage '" + stage.name + "' has no scorer");
    if (const auto* top = std::get_if<TopM>(&stage.keep); top && top->m == 0) {
      throw UsageError("cascade stage '" + stage.name + "' keeps zero candidates");
    }
  }
  std::vector<std::string> survivors = initial;
  for (std::size_t s = 0; s < spec.size(); ++s) {
    const auto& stage = spec[s];
    ScoreVector scored;
    scored.reserve(survivors.size());
    for (auto& id : survivors) {
      const double score = stage.scorer->score(query_id, id).value_or(0.0);
      scored.push_back(ScoredId{std::move(id), score});
    }
    sort_ranking(scored);
    if (const auto* top = std::get_if<TopM>(&stage.keep)) {
      if (scored.size() > top->m) scored.resize(top->m);
    } else {
      const double min = std::get<MinScore>(stage.keep).threshold;
      std::erase_if(scored, [min](const ScoredId& c) { return c.score < min; });
    }
    survivors.clear();
    for (auto& c : scored) survivors.push_back(std::move(c.id));
    if (survivors.empty()) {
      warn("cascade for query " + std::string(query_id) + " emptied at stage " +
           std::to_string(s) + (stage.name.empty() ? "" : " (" + stage.name + ")"));
      return {};
    }
  }
  return survivors;
}

Selections majority_vote(const std::vector<Selections>& runs,
                         std::optional<std::size_t> quorum) {
  check_same_queries(runs);
  const std::size_t need = quorum.value_or(runs.size() / 2 + 1);
  if (need == 0) throw UsageError("majority_vote quorum must be at least 1");
  Selections out;
  for (const auto& [query, _] : runs[0]) {
    std::map<std::string, std::size_t> votes;
    for (const auto& run : runs) {
      for (const auto& id : run.find(query)->second) ++votes[id];
    }
    auto& chosen = out[query];
    for (const auto& [id, count] : votes) {
      if (count >= need) chosen.insert(id);
    }
  }
  return out;
}

BinaryLabels majority_vote(const std::vector<BinaryLabels>& runs) {
  check_same_queries(runs);
  BinaryLabels out;
  for (const auto& [query, first_label] : runs[0]) {
    std::size_t yes = 0;
    for (const auto& run : runs) yes += run.find(query)->second ? 1 : 0;
    const std::size_t no = runs.size() - yes;
    if (yes != no) {
      out[query] = yes > no;
    } else {
      warn("vote tie for query " + query + "; using the first run's label");
      out[query] = first_label;
    }
  }
  return out;
}

FusionGrid FusionGrid::defaults() {
  FusionGrid grid;
  for (int i = 0; i <= 10; ++i) {
    grid.alphas.push_back(i / 10.0);
    grid.betas.push_back(i / 10.0);
  }
  for (int i = 0; i <= 20; ++i) grid.thresholds.push_back(i / 20.0);
  return grid;
}

std::vector<FusionParams> FusionGrid::points() const {
  auto sorted = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  };
  std::vector<FusionParams> out;
  for (double a : sorted(alphas)) {
    for (double b : sorted(betas)) {
      if (a == 0.0 && b == 0.0) continue;
      for (double t : sorted(thresholds)) out.push_back(FusionParams{a, b, t});
    }
  }
  return out;
}

namespace {

const ScoreVector& vector_for(const std::map<std::string, ScoreVector, std::less<>>& m,
                              const std::string& query) {
  static const ScoreVector kEmpty;
  const auto it = m.find(query);
  return it == m.end() ? kEmpty : it->second;
}

GoldLabels restrict_gold(const std::vector<std::string>& dev_queries, const GoldLabels& gold) {
  GoldLabels dev;
  for (const auto& q : dev_queries) {
    const auto it = gold.find(q);
    if (it == gold.end()) throw DataError("dev query without gold labels: " + q);
    dev.emplace(q, it->second);
  }
  return dev;
}

double score_selections(const Selections& selected, const GoldLabels& dev_gold,
                        Objective objective) {
  return objective == Objective::kMicroF1 ? micro_prf(selected, dev_gold).f1
                                          : macro_prf2(selected, dev_gold).f2;
}

}  // namespace

double evaluate_fusion(const std::vector<std::string>& dev_queries, const GoldLabels& gold,
                       const std::map<std::string, ScoreVector, std::less<>>& lex,
                       const std::map<std::string, ScoreVector, std::less<>>& sem,
                       const FusionParams& params, Objective objective) {
  params.validate();
  const GoldLabels dev_gold = restrict_gold(dev_queries, gold);
  Selections selected;
  for (const auto& q : dev_queries) {
    auto& set = selected[q];
    for (auto& c : fuse_and_select(vector_for(lex, q), vector_for(sem, q), params)) {
      set.insert(std::move(c.id));
    }
  }
  return score_selections(selected, dev_gold, objective);
}

GridSearchResult grid_search(const std::vector<std::string>& dev_queries,
                             const GoldLabels& gold,
                             const std::map<std::string, ScoreVector, std::less<>>& lex,
                             const std::map<std::string, ScoreVector, std::less<>>& sem,
                             const FusionGrid& grid, Objective objective, unsigned jobs) {
  if (dev_queries.empty()) throw DataError("grid_search: empty dev query set");
  const auto points = grid.points();
  if (points.empty()) throw UsageError("grid_search: empty grid");
  for (const auto& p : points) p.validate();
  const GoldLabels dev_gold = restrict_gold(dev_queries, gold);

  // Points sharing (alpha, beta) are contiguous; fuse once per block.
  std::vector<std::size_t> block_starts;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i == 0 || points[i].alpha != points[i - 1].alpha ||
        points[i].beta != points[i - 1].beta) {
      block_starts.push_back(i);
    }
  }
  block_starts.push_back(points.size());

  GridSearchResult result;
  result.points.resize(points.size());
  parallel_for(block_starts.size() - 1, jobs, [&](std::size_t b) {
    const std::size_t begin = block_starts[b];
    const std::size_t end = block_starts[b + 1];
    std::vector<ScoreVector> fused;
    fused.reserve(dev_queries.size());
    for (const auto& q : dev_queries) {
      const auto& l = vector_for(lex, q);
      fused.push_back(l.empty() ? ScoreVector{}
                                : weighted_fuse(l, vector_for(sem, q), points[begin]));
    }
    for (std::size_t i = begin; i < end; ++i) {
      Selections selected;
      for (std::size_t qi = 0; qi < dev_queries.size(); ++qi) {
        auto& set = selected[dev_queries[qi]];
        for (auto& c : trail_select_scored(fused[qi], points[i].trail_threshold)) {
          set.insert(std::move(c.id));
        }
      }
      result.points[i] = GridPoint{points[i], score_selections(selected, dev_gold, objective)};
    }
  });

  result.best = result.points.front().params;
  result.best_objective = result.points.front().objective;
  for (const auto& p : result.points) {
    if (p.objective > result.best_objective) {
      result.best = p.params;
      result.best_objective = p.objective;
    }
  }
  return result;
}

std::string format_grid_csv(const GridSearchResult& result) {
  std::string out = "alpha,beta,trail_threshold,objective\n";
  for (const auto& p : result.points) {
    out += format_double(p.params.alpha) + "," + format_double(p.params.beta) + "," +
           format_double(p.params.trail_threshold) + "," + format_double(p.objective) + "\n";
  }
  out += "# best: " + format_double(result.best.alpha) + "," + format_double(result.best.beta) +
         "," + format_double(result.best.trail_threshold) + "," +
         format_double(result.best_objective) + "\n";
  return out;
}

}  // namespace lexfuse
