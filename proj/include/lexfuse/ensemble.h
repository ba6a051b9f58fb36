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

#ifndef LEXFUSE_ENSEMBLE_H_
#define LEXFUSE_ENSEMBLE_H_

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lexfuse/evalkit.h"
#include "lexfuse/run.h"
#include "lexfuse/scorer.h"

namespace lexfuse {

// Weights of the lexical and semantic scores plus the trail threshold used
// to cut the fused ranking.
struct FusionParams {
  double alpha = 0.5;
  double beta = 0.5;
  double trail_threshold = 0.0;

  // Throws UsageError unless alpha, beta >= 0, alpha + beta > 0 and the
  // threshold lies in [0, 1].
  void validate() const;
  bool operator==(const FusionParams&) const = default;
};

// x' = (x - min) / (max - min); a constant vector maps to all 1.0. Order of
// candidates is preserved. Throws DataError on an empty vector.
ScoreVector minmax_normalize(const ScoreVector& v);

// normalize(alpha * normalize(lex) + beta * normalize(sem)) over the union
// of candidates; a candidate missing from one side scores 0 there before
// that side is normalized. Lexical candidates come first, in input order,
// followed by semantic-only candidates.
ScoreVector weighted_fuse(const ScoreVector& lex, const ScoreVector& sem,
                          const FusionParams& params);

// Keeps candidates with (highest - score) / highest <= threshold, ordered by
// score descending then id ascending.
ScoreVector trail_select_scored(const ScoreVector& normalized, double threshold);
std::vector<std::string> trail_select(const ScoreVector& normalized, double threshold);

// weighted_fuse followed by trail_select_scored. An empty lexical side
// yields an empty selection.
ScoreVector fuse_and_select(const ScoreVector& lex, const ScoreVector& sem,
                            const FusionParams& params);

struct TopM {
  std::size_t m = 1;
};
struct MinScore {
  double threshold = 0.0;
};
using KeepRule = std::variant<TopM, MinScore>;

struct CascadeStage {
  std::shared_ptr<const Scorer> scorer;
  KeepRule keep;
  std::string name;
};

// Stages run in order, each re-scoring the survivors of the previous one.
using CascadeSpec = std::vector<CascadeStage>;

// Returns the survivors of the last stage ordered by that stage's score.
// Pairs a stage's scorer does not know score 0.
std::vector<std::string> cascade(const CascadeSpec& spec, std::string_view query_id,
                                 const std::vector<std::string>& initial);

// Emits a candidate for a query iff it appears in at least `quorum` runs
// (default: strict majority). All runs must cover the same queries.
Selections majority_vote(const std::vector<Selections>& runs,
                         std::optional<std::size_t> quorum = std::nullopt);

// Strict-majority yes/no vote. Ties (even run counts) take the label of the
// first run.
BinaryLabels majority_vote(const std::vector<BinaryLabels>& runs);

struct FusionGrid {
  std::vector<double> alphas;
  std::vector<double> betas;
  std::vector<double> thresholds;

  // alpha, beta in {0.0, 0.1, ..., 1.0}; threshold in {0.00, 0.05, ..., 1.00}.
  static FusionGrid defaults();
  // Grid points in evaluation order, skipping alpha = beta = 0.
  std::vector<FusionParams> points() const;
};

enum class Objective { kMicroF1, kMacroF2 };

struct GridPoint {
  FusionParams params;
  double objective = 0.0;
};

struct GridSearchResult {
  FusionParams best;
  double best_objective = 0.0;
  std::vector<GridPoint> points;
};

double evaluate_fusion(const std::vector<std::string>& dev_queries, const GoldLabels& gold,
                       const std::map<std::string, ScoreVector, std::less<>>& lex,
                       const std::map<std::string, ScoreVector, std::less<>>& sem,
                       const FusionParams& params, Objective objective);

// Exhaustive search over the grid; ties go to the lexicographically
// smallest (alpha, beta, trail_threshold).
GridSearchResult grid_search(const std::vector<std::string>& dev_queries,
                             const GoldLabels& gold,
                             const std::map<std::string, ScoreVector, std::less<>>& lex,
                             const std::map<std::string, ScoreVector, std::less<>>& sem,
                             const FusionGrid& grid, Objective objective,
                             unsigned jobs = 1);

// "alpha,beta,trail_threshold,objective" rows plus a trailing
// "# best: ..." summary line.
std::string format_grid_csv(const GridSearchResult& result);

}  // namespace lexfuse

#endif  // LEXFUSE_ENSEMBLE_H_
