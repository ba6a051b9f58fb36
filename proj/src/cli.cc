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

#include "lexfuse/cli.h"

#include <filesystem>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lexfuse/corpus.h"
#include "lexfuse/ensemble.h"
#include "lexfuse/error.h"
#include "lexfuse/evalkit.h"
#include "lexfuse/lexindex.h"
#include "lexfuse/pipeline.h"
#include "lexfuse/run.h"
#include "lexfuse/semscore.h"
#include "lexfuse/text.h"

namespace lexfuse {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Every value a subcommand may read, from the command line or a config file.
struct Params {
  std::string config;
  std::string out_dir;
  std::uint64_t seed = 17;
  unsigned jobs = 1;

  std::string corpus;
  std::string layout = "auto";
  std::string queries;
  std::string queries_layout = "auto";
  std::string query_list;
  std::string index;
  std::string unit = "document";
  double k1 = 1.2;
  double b = 0.75;
  bool stopwords = false;

  std::string task;
  std::string phase = "infer";
  std::string run_name;
  std::string score_table;
  double alpha = 0.5;
  double beta = 0.5;
  double trail_threshold = 0.0;
  std::size_t per_paragraph_k = 200;
  bool use_year = false;
  bool important_only = false;
  std::size_t min_hits = 1;
  std::size_t max_cases = 200;
  std::size_t train_topk = 30;
  std::size_t infer_topk = 500;

  std::string run;
  std::vector<std::string> runs;
  std::size_t quorum = 0;
  bool binary = false;

  std::string gold;
  std::string dev_queries;
  std::string objective = "macro-f2";
  std::vector<double> alphas = FusionGrid::defaults().alphas;
  std::vector<double> betas = FusionGrid::defaults().betas;
  std::vector<double> thresholds = FusionGrid::defaults().thresholds;

  std::string mode;
  std::vector<std::size_t> ks = {10, 20, 50, 100, 200};
  bool csv = false;
  bool skip_unanswered = false;
};

std::string key_of(std::string_view flag) {
  while (!flag.empty() && flag.front() == '-') flag.remove_prefix(1);
  std::string key(flag);
  for (char& c : key) {
    if (c == '-') c = '_';
  }
  return key;
}

// Binds command-line options to Params fields so that a JSON config can fill
// whatever the command line left unset, and the merged values can be echoed.
class Settings {
 public:
  Settings(CLI::App* app, std::string command) : app_(app), command_(std::move(command)) {}

  template <typename T>
  CLI::Option* option(const std::string& flag, T& var, const std::string& help) {
    CLI::Option* opt = app_->add_option(flag, var, help)->capture_default_str();
    add(flag, opt, var);
    return opt;
  }

  void flag(const std::string& flag, bool& var, const std::string& help) {
    add(flag, app_->add_flag(flag, var, help), var);
  }

  void apply(const json& config) {
    if (!config.is_object()) throw UsageError("config file must hold a JSON object");
    for (const auto& [key, value] : config.items()) {
      if (key == "command") {
        if (value != command_) {
          throw UsageError("config was written for '" + value.dump() + "', not '" + command_ + "'");
        }
        continue;
      }
      const auto it = std::find_if(bindings_.begin(), bindings_.end(),
                                   [&](const Binding& b) { return b.key == key; });
      if (it == bindings_.end()) {
        throw UsageError("unknown config key '" + key + "' for " + command_);
      }
      if (it->option->count() > 0) continue;
      try {
        it->load(value);
      } catch (const json::exception&) {
        throw UsageError("config key '" + key + "' has the wrong type");
      }
    }
  }

  json effective() const {
    json out = json::object();
    out["command"] = command_;
    for (const auto& b : bindings_) out[b.key] = b.dump();
    return out;
  }

 private:
  struct Binding {
    std::string key;
    CLI::Option* option;
    std::function<void(const json&)> load;
    std::function<json()> dump;
  };

  template <typename T>
  void add(const std::string& flag, CLI::Option* opt, T& var) {
    bindings_.push_back(Binding{key_of(flag), opt,
                                [&var](const json& j) { var = j.get<T>(); },
                                [&var] { return json(var); }});
  }

  CLI::App* app_;
  std::string command_;
  std::vector<Binding> bindings_;
};

void add_common(Settings& s, Params& p) {
  s.option("--seed", p.seed, "Random seed");
  s.option("--jobs", p.jobs, "Worker threads (0 = all cores)");
  s.option("--out-dir", p.out_dir, "Output directory");
}

void require(const std::string& value, std::string_view flag) {
  if (value.empty()) throw UsageError("missing required option --" + std::string(flag));
}

fs::path prepare_out_dir(const Params& p) {
  require(p.out_dir, "out-dir");
  fs::create_directories(p.out_dir);
  return p.out_dir;
}

void echo_config(const fs::path& dir, const Settings& s) {
  write_file(dir / "config.json", s.effective().dump(2) + "\n");
}

std::vector<std::string> read_id_list(const std::string& path) {
  std::vector<std::string> ids;
  for (auto line : split(read_file(path), '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    ids.emplace_back(line);
  }
  return ids;
}

CorpusLayout resolve_layout(const std::string& name, CorpusLayout fallback) {
  return name == "auto" ? fallback : parse_layout(name);
}

Bm25Params bm25_of(const Params& p) { return Bm25Params{p.k1, p.b}; }

FusionParams fusion_of(const Params& p) {
  FusionParams f{p.alpha, p.beta, p.trail_threshold};
  f.validate();
  return f;
}

std::optional<ScoreTable> maybe_table(const Params& p) {
  if (p.score_table.empty()) return std::nullopt;
  return load_score_table(p.score_table);
}

void report_misses(const std::optional<ScoreTable>& table, std::ostream& err) {
  if (table && table->misses() > 0) {
    err << "warning: " << table->misses() << " (query, candidate) pairs missing from score table "
        << table->name() << "\n";
  }
}

int cmd_index(const Params& p, const Settings& s, std::ostream& out) {
  require(p.corpus, "corpus");
  const auto dir = prepare_out_dir(p);
  const auto store = load_corpus(p.corpus, resolve_layout(p.layout, CorpusLayout::kJsonl));
  const auto index = build_index(store, parse_index_unit(p.unit), bm25_of(p),
                                 Analyzer{p.stopwords});
  index.save(dir / "index.bin");
  echo_config(dir, s);
  out << "indexed " << index.n_units() << " " << p.unit << " units, " << index.n_terms()
      << " terms\n";
  return kExitOk;
}

InvertedIndex index_for(const Params& p, const CorpusStore& store, IndexUnit unit) {
  if (!p.index.empty()) return InvertedIndex::load(p.index);
  return build_index(store, unit, bm25_of(p), Analyzer{p.stopwords});
}

int cmd_retrieve(const Params& p, const Settings& s, std::ostream& out, std::ostream& err) {
  require(p.task, "task");
  const auto dir = prepare_out_dir(p);
  const auto table = maybe_table(p);
  const ScoreTable* table_ptr = table ? &*table : nullptr;
  const std::string name = p.run_name.empty() ? p.task : p.run_name;
  RunResult run;

  if (p.task == "task1") {
    require(p.corpus, "corpus");
    const auto layout = resolve_layout(p.layout, CorpusLayout::kColieeTask1Dir);
    const auto candidates = load_corpus(p.corpus, layout);
    const auto query_store =
        p.queries.empty() ? candidates
                          : load_corpus(p.queries, resolve_layout(p.queries_layout,
                                                                  fs::is_directory(p.queries)
                                                                      ? layout
                                                                      : CorpusLayout::kJsonl));
    std::vector<ProcessedDocument> queries;
    if (!p.query_list.empty()) {
      for (const auto& id : read_id_list(p.query_list)) queries.push_back(query_store.at(id));
    } else {
      for (const auto& [_, doc] : query_store.documents()) queries.push_back(doc);
    }
    Task1Config cfg;
    cfg.per_paragraph_k = p.per_paragraph_k;
    cfg.use_year_in_query = p.use_year;
    cfg.important_only = p.important_only;
    cfg.min_hits = p.min_hits;
    cfg.max_cases = p.max_cases;
    if (table) cfg.fusion = fusion_of(p);
    cfg.jobs = p.jobs;
    const auto index = index_for(p, candidates, IndexUnit::kParagraph);
    run = run_task1(candidates, queries, index, table_ptr, cfg, name);
  } else if (p.task == "task2") {
    require(p.corpus, "corpus");
    const auto queries = load_entailment_queries(p.corpus);
    run = run_task2(queries, table_ptr, fusion_of(p), bm25_of(p), name, p.jobs);
  } else if (p.task == "task3") {
    require(p.queries, "queries");
    if (p.index.empty()) require(p.corpus, "corpus");
    const auto questions = load_queries(p.queries);
    const auto index =
        p.index.empty()
            ? index_for(p, load_corpus(p.corpus, resolve_layout(p.layout, CorpusLayout::kStatuteFile)),
                        IndexUnit::kDocument)
            : InvertedIndex::load(p.index);
    Task3Config cfg;
    cfg.train_topk = p.train_topk;
    cfg.infer_topk = p.infer_topk;
    cfg.fusion = fusion_of(p);
    cfg.jobs = p.jobs;
    cfg.validate();
    if (p.phase == "train") {
      run = lexical_candidates(index, questions, cfg.train_topk, name, p.jobs);
    } else if (p.phase == "infer") {
      run = run_task3(index, questions, table_ptr, cfg, name);
    } else {
      throw UsageError("unknown phase '" + p.phase + "' (expected infer or train)");
    }
  } else {
    throw UsageError("unknown task '" + p.task + "' (expected task1, task2 or task3)");
  }

  write_run(run, dir / "run.tsv");
  echo_config(dir, s);
  report_misses(table, err);
  out << "wrote " << (dir / "run.tsv").string() << " (" << run.queries.size() << " queries)\n";
  return kExitOk;
}

int cmd_fuse(const Params& p, const Settings& s, std::ostream& out, std::ostream& err) {
  require(p.run, "run");
  require(p.score_table, "score-table");
  const auto dir = prepare_out_dir(p);
  const auto lex_run = read_run(p.run);
  const auto table = load_score_table(p.score_table);
  const auto params = fusion_of(p);
  RunResult fused;
  fused.name = p.run_name.empty() ? lex_run.name + "+" + table.name() : p.run_name;
  for (const auto& [query, lex] : lex_run.queries) {
    ScoreVector sem;
    for (const auto& c : lex) sem.push_back(ScoredId{c.id, lookup(table, query, c.id)});
    fused.queries[query] = fuse_and_select(lex, sem, params);
  }
  write_run(fused, dir / "run.tsv");
  echo_config(dir, s);
  if (table.misses() > 0) {
    err << "warning: " << table.misses() << " pairs missing from score table\n";
  }
  out << "wrote " << (dir / "run.tsv").string() << "\n";
  return kExitOk;
}

int cmd_vote(const Params& p, const Settings& s, std::ostream& out) {
  if (p.runs.empty()) throw UsageError("missing required option --runs");
  const auto dir = prepare_out_dir(p);
  if (p.binary) {
    std::vector<BinaryLabels> runs;
    for (const auto& path : p.runs) runs.push_back(read_labels(path));
    write_file(dir / "labels.tsv", format_labels(majority_vote(runs)));
    echo_config(dir, s);
    out << "wrote " << (dir / "labels.tsv").string() << "\n";
    return kExitOk;
  }
  std::vector<Selections> runs;
  for (const auto& path : p.runs) runs.push_back(read_run(path).selections());
  const auto quorum = p.quorum == 0 ? std::nullopt : std::optional<std::size_t>(p.quorum);
  const auto voted = majority_vote(runs, quorum);
  RunResult run;
  run.name = p.run_name.empty() ? "vote" : p.run_name;
  for (const auto& [query, chosen] : voted) {
    auto& ranking = run.queries[query];
    for (const auto& id : chosen) {
      std::size_t votes = 0;
      for (const auto& r : runs) votes += r.find(query)->second.count(id);
      ranking.push_back(ScoredId{id, static_cast<double>(votes) / static_cast<double>(runs.size())});
    }
    sort_ranking(ranking);
  }
  write_run(run, dir / "run.tsv");
  echo_config(dir, s);
  out << "wrote " << (dir / "run.tsv").string() << "\n";
  return kExitOk;
}

Objective parse_objective(const std::string& name) {
  if (name == "micro-f1") return Objective::kMicroF1;
  if (name == "macro-f2") return Objective::kMacroF2;
  throw UsageError("unknown objective '" + name + "' (expected micro-f1 or macro-f2)");
}

int cmd_tune(const Params& p, const Settings& s, std::ostream& out, std::ostream& err) {
  require(p.run, "run");
  require(p.gold, "gold");
  const auto dir = prepare_out_dir(p);
  const auto objective = parse_objective(p.objective);
  const auto lex_run = read_run(p.run);
  const auto gold = load_gold(p.gold);
  const auto table = maybe_table(p);

  std::vector<std::string> dev;
  if (!p.dev_queries.empty()) {
    dev = read_id_list(p.dev_queries);
  } else {
    for (const auto& [q, _] : gold) dev.push_back(q);
  }
  std::map<std::string, ScoreVector, std::less<>> lex(lex_run.queries.begin(),
                                                       lex_run.queries.end());
  std::map<std::string, ScoreVector, std::less<>> sem;
  if (table) {
    for (const auto& [query, ranking] : lex) {
      auto& v = sem[query];
      for (const auto& c : ranking) v.push_back(ScoredId{c.id, lookup(*table, query, c.id)});
    }
  }
  const FusionGrid grid{p.alphas, p.betas, p.thresholds};
  const auto result = grid_search(dev, gold, lex, sem, grid, objective, p.jobs);
  write_file(dir / "grid.csv", format_grid_csv(result));
  const json params = {{"alpha", result.best.alpha},
                       {"beta", result.best.beta},
                       {"trail_threshold", result.best.trail_threshold},
                       {"objective", result.best_objective}};
  write_file(dir / "params.json", params.dump(2) + "\n");
  echo_config(dir, s);
  report_misses(table, err);
  out << params.dump(2) << "\n";
  return kExitOk;
}

int cmd_eval(const Params& p, const Settings& s, std::ostream& out) {
  require(p.mode, "mode");
  require(p.run, "run");
  require(p.gold, "gold");
  std::string report;
  std::string file = "report.json";
  if (p.mode == "accuracy") {
    const double acc = accuracy(read_labels(p.run), load_binary_gold(p.gold));
    report = json{{"accuracy", acc}}.dump(2) + "\n";
  } else {
    const auto run = read_run(p.run);
    const auto gold = load_gold(p.gold);
    if (p.mode == "micro" || p.mode == "micro-f1") {
      report = to_json(micro_prf(run.selections(), gold)).dump(2) + "\n";
    } else if (p.mode == "macro-f2" || p.mode == "macro") {
      const auto macro = macro_prf2(run.selections(), gold,
                                    p.skip_unanswered ? Unanswered::kSkip : Unanswered::kZeroScore);
      if (p.csv) {
        report = macro_csv(macro);
        file = "report.csv";
      } else {
        report = to_json(macro).dump(2) + "\n";
      }
    } else if (p.mode == "recall" || p.mode == "recall@k") {
      json j = json::object();
      for (const auto& [k, r] : recall_at_k(run, gold, p.ks)) j[std::to_string(k)] = r;
      report = json{{"recall_at_k", j}}.dump(2) + "\n";
    } else {
      throw UsageError("unknown eval mode '" + p.mode +
                       "' (expected micro, macro-f2, recall or accuracy)");
    }
  }
  out << report;
  if (!p.out_dir.empty()) {
    const auto dir = prepare_out_dir(p);
    write_file(dir / file, report);
    echo_config(dir, s);
  }
  return kExitOk;
}

int cmd_build_pairs(const Params& p, const Settings& s, std::ostream& out) {
  require(p.gold, "gold");
  require(p.run, "run");
  const auto dir = prepare_out_dir(p);
  const auto gold = load_gold(p.gold);
  const auto retrieved = read_run(p.run);
  std::vector<std::string> queries;
  if (!p.query_list.empty()) {
    queries = read_id_list(p.query_list);
  } else {
    for (const auto& [q, _] : gold) queries.push_back(q);
  }
  const auto pairs = build_pairs(queries, gold, retrieved, p.seed);
  write_file(dir / "pairs.tsv", format_pairs(pairs));
  echo_config(dir, s);
  out << "wrote " << pairs.size() << " pairs to " << (dir / "pairs.tsv").string() << "\n";
  return kExitOk;
}

json load_config(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw UsageError(path + ": invalid JSON config: " + e.what());
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"lexfuse: lexical retrieval, score fusion and evaluation for legal IR"};
  app.name("lexfuse");
  app.require_subcommand(1);
  Params p;
  std::map<std::string, Settings> settings;

  auto sub = [&](const std::string& name, const std::string& help) -> Settings& {
    CLI::App* cmd = app.add_subcommand(name, help);
    auto& s = settings.emplace(name, Settings(cmd, name)).first->second;
    cmd->add_option("--config", p.config, "JSON config; command-line values take precedence");
    add_common(s, p);
    return s;
  };

  {
    auto& s = sub("index", "Build an index and write its binary snapshot");
    s.option("--corpus", p.corpus, "Corpus path");
    s.option("--layout", p.layout, "jsonl | coliee_task1_dir | coliee_task2_dir | statute_file");
    s.option("--unit", p.unit, "document | paragraph");
    s.option("--k1", p.k1, "BM25 k1");
    s.option("--b", p.b, "BM25 b");
    s.flag("--stopwords", p.stopwords, "Drop English stopwords when indexing");
  }
  {
    auto& s = sub("retrieve", "Run task1 | task2 | task3 retrieval");
    s.option("--task", p.task, "task1 | task2 | task3");
    s.option("--corpus", p.corpus, "Candidate corpus (task2: query directory tree)");
    s.option("--layout", p.layout, "Corpus layout (auto picks the task default)");
    s.option("--queries", p.queries, "Task1 base cases or task3 questions (JSONL)");
    s.option("--queries-layout", p.queries_layout, "Layout of --queries for task1");
    s.option("--query-list", p.query_list, "Restrict task1 to these query ids");
    s.option("--index", p.index, "Prebuilt index snapshot");
    s.option("--k1", p.k1, "BM25 k1");
    s.option("--b", p.b, "BM25 b");
    s.flag("--stopwords", p.stopwords, "Drop English stopwords when indexing");
    s.option("--score-table", p.score_table, "Semantic score table (TSV)");
    s.option("--alpha", p.alpha, "Lexical weight");
    s.option("--beta", p.beta, "Semantic weight");
    s.option("--trail-threshold", p.trail_threshold, "Trail threshold");
    s.option("--per-paragraph-k", p.per_paragraph_k, "Task1 paragraphs per query paragraph");
    s.flag("--use-year", p.use_year, "Task1: append the base-case year to each query");
    s.flag("--important-only", p.important_only, "Task1: query with important paragraphs only");
    s.option("--min-hits", p.min_hits, "Task1: minimum paragraph hits per case");
    s.option("--max-cases", p.max_cases, "Task1: cases returned per query");
    s.option("--train-topk", p.train_topk, "Task3 candidates for training");
    s.option("--infer-topk", p.infer_topk, "Task3 candidates for inference");
    s.option("--phase", p.phase, "Task3: infer | train");
    s.option("--run-name", p.run_name, "Run name");
  }
  {
    auto& s = sub("fuse", "Weighted fusion and trail selection of a run with a score table");
    s.option("--run", p.run, "Lexical run (TSV)");
    s.option("--score-table", p.score_table, "Semantic score table (TSV)");
    s.option("--alpha", p.alpha, "Lexical weight");
    s.option("--beta", p.beta, "Semantic weight");
    s.option("--trail-threshold", p.trail_threshold, "Trail threshold");
    s.option("--run-name", p.run_name, "Run name");
  }
  {
    auto& s = sub("vote", "Majority vote over runs or yes/no label files");
    s.option("--runs", p.runs, "Run files")->expected(1, -1);
    s.option("--quorum", p.quorum, "Votes needed (0 = strict majority)");
    s.flag("--binary", p.binary, "Inputs are yes/no label files");
    s.option("--run-name", p.run_name, "Run name");
  }
  {
    auto& s = sub("tune", "Grid search over alpha, beta and trail threshold");
    s.option("--run", p.run, "Lexical run (TSV)");
    s.option("--score-table", p.score_table, "Semantic score table (TSV)");
    s.option("--gold", p.gold, "Gold labels (JSON)");
    s.option("--dev-queries", p.dev_queries, "Dev query ids, one per line (default: all gold)");
    s.option("--objective", p.objective, "micro-f1 | macro-f2");
    s.option("--alphas", p.alphas, "Alpha grid");
    s.option("--betas", p.betas, "Beta grid");
    s.option("--thresholds", p.thresholds, "Trail threshold grid");
  }
  {
    auto& s = sub("eval", "Evaluate a run against gold labels");
    s.option("--mode", p.mode, "micro | macro-f2 | recall | accuracy");
    s.option("--run", p.run, "Run (TSV) or label file for accuracy");
    s.option("--gold", p.gold, "Gold labels (JSON)");
    s.option("--ks", p.ks, "Cutoffs for recall");
    s.flag("--csv", p.csv, "Macro: per-query CSV instead of JSON");
    s.flag("--skip-unanswered", p.skip_unanswered, "Macro: skip gold queries absent from the run");
  }
  {
    auto& s = sub("build-pairs", "Build 1:2 positive/negative training pairs");
    s.option("--gold", p.gold, "Gold labels (JSON)");
    s.option("--run", p.run, "Retrieved candidates (TSV)");
    s.option("--query-list", p.query_list, "Query ids, one per line (default: all gold)");
  }

  if (argc > 1 && argv[1][0] != '-' && !settings.contains(argv[1])) {
    err << "error: unknown subcommand '" << argv[1] << "'\n\n" << app.help();
    return kExitUsage;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  const auto chosen = app.get_subcommands().front();
  const std::string command = chosen->get_name();
  Settings& s = settings.at(command);
  try {
    if (!p.config.empty()) s.apply(load_config(p.config));
    if (command == "index") return cmd_index(p, s, out);
    if (command == "retrieve") return cmd_retrieve(p, s, out, err);
    if (command == "fuse") return cmd_fuse(p, s, out, err);
    if (command == "vote") return cmd_vote(p, s, out);
    if (command == "tune") return cmd_tune(p, s, out, err);
    if (command == "eval") return cmd_eval(p, s, out);
    if (command == "build-pairs") return cmd_build_pairs(p, s, out);
    err << "error: unhandled subcommand " << command << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
}

}  // namespace lexfuse
