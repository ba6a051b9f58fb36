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

#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.h"
#include "json.hpp"
#include "lexfuse/log.h"
#include "lexfuse/run.h"
#include "lexfuse/text.h"

namespace lexfuse {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "lexfuse");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    previous_ = set_log_sink({});
    fx_ = fixtures::statute_fixture(3, 40, 8);
    fixtures::write(dir_ / "civil.jsonl", fixtures::statute_jsonl(fx_.articles));
    fixtures::write(dir_ / "questions.jsonl", fixtures::questions_jsonl(fx_.questions));
    fixtures::write(dir_ / "gold.json", fixtures::gold_json(fx_.gold));
  }
  void TearDown() override { set_log_sink(previous_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  LogSink previous_;
  fixtures::TempDir dir_;
  fixtures::StatuteFixture fx_;
};

TEST_F(Cli, HelpAndUsageErrors) {
  const auto help = cli({"--help"});
  EXPECT_EQ(help.code, kExitOk);
  EXPECT_NE(help.out.find("retrieve"), std::string::npos);
  const auto unknown = cli({"frobnicate"});
  EXPECT_EQ(unknown.code, kExitUsage);
  EXPECT_NE(unknown.err.find("unknown subcommand 'frobnicate'"), std::string::npos);
  EXPECT_EQ(cli({}).code, kExitUsage);
  EXPECT_EQ(cli({"retrieve", "--task", "task9", "--corpus", path("civil.jsonl"), "--out-dir",
                 path("o")}).code,
            kExitUsage);
  EXPECT_EQ(cli({"eval", "--mode", "micro", "--bogus-flag"}).code, kExitUsage);
}

TEST_F(Cli, DataErrorsExitTwo) {
  const auto r = cli({"index", "--corpus", path("missing.jsonl"), "--out-dir", path("o")});
  EXPECT_EQ(r.code, kExitData);
  EXPECT_NE(r.err.find("missing.jsonl"), std::string::npos);
}

TEST_F(Cli, RetrieveTask3ThenEval) {
  const auto r = cli({"retrieve", "--task", "task3", "--corpus", path("civil.jsonl"), "--queries",
                      path("questions.jsonl"), "--out-dir", path("run")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto run = read_run(dir_ / "run/run.tsv");
  EXPECT_EQ(run.queries.size(), fx_.questions.size());
  EXPECT_TRUE(std::filesystem::exists(dir_ / "run/config.json"));

  const auto e = cli({"eval", "--mode", "macro-f2", "--run", path("run/run.tsv"), "--gold",
                      path("gold.json")});
  ASSERT_EQ(e.code, kExitOk) << e.err;
  EXPECT_EQ(nlohmann::json::parse(e.out).at("f2"), 1.0);

  const auto csv = cli({"eval", "--mode", "macro-f2", "--csv", "--run", path("run/run.tsv"),
                        "--gold", path("gold.json")});
  EXPECT_EQ(csv.out.rfind("query_id,precision,recall,f2\n", 0), 0u);

  const auto recall = cli({"eval", "--mode", "recall", "--ks", "1", "5", "--run",
                           path("run/run.tsv"), "--gold", path("gold.json")});
  ASSERT_EQ(recall.code, kExitOk) << recall.err;
  EXPECT_EQ(nlohmann::json::parse(recall.out).at("recall_at_k").at("1"), 1.0);
}

TEST_F(Cli, IndexSnapshotIsReusable) {
  ASSERT_EQ(cli({"index", "--corpus", path("civil.jsonl"), "--layout", "statute_file",
                 "--out-dir", path("idx")}).code,
            kExitOk);
  ASSERT_EQ(cli({"retrieve", "--task", "task3", "--index", path("idx/index.bin"), "--queries",
                 path("questions.jsonl"), "--out-dir", path("a")}).code,
            kExitOk);
  ASSERT_EQ(cli({"retrieve", "--task", "task3", "--corpus", path("civil.jsonl"), "--queries",
                 path("questions.jsonl"), "--out-dir", path("b")}).code,
            kExitOk);
  EXPECT_EQ(read_file(dir_ / "a/run.tsv"), read_file(dir_ / "b/run.tsv"));
}

TEST_F(Cli, ConfigFileAndOverrides) {
  fixtures::write(dir_ / "cfg.json", nlohmann::json{{"task", "task3"},
                                                    {"corpus", path("civil.jsonl")},
                                                    {"queries", path("questions.jsonl")},
                                                    {"trail_threshold", 0.5},
                                                    {"run_name", "from_config"}}
                                         .dump());
  const auto r = cli({"retrieve", "--config", path("cfg.json"), "--run-name", "override",
                      "--out-dir", path("c")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto echoed = nlohmann::json::parse(read_file(dir_ / "c/config.json"));
  EXPECT_EQ(echoed.at("run_name"), "override");
  EXPECT_EQ(echoed.at("trail_threshold"), 0.5);
  EXPECT_EQ(read_run(dir_ / "c/run.tsv").name, "override");

  fixtures::write(dir_ / "bad.json", R"({"task": "task3", "tolerance": 3})");
  const auto bad = cli({"retrieve", "--config", path("bad.json"), "--out-dir", path("d")});
  EXPECT_EQ(bad.code, kExitUsage);
  EXPECT_NE(bad.err.find("tolerance"), std::string::npos);
}

TEST_F(Cli, TuneWritesFullGrid) {
  ASSERT_EQ(cli({"retrieve", "--task", "task3", "--corpus", path("civil.jsonl"), "--queries",
                 path("questions.jsonl"), "--trail-threshold", "1", "--out-dir", path("r")}).code,
            kExitOk);
  std::string table;
  for (const auto& [q, v] : read_run(dir_ / "r/run.tsv").queries) {
    for (const auto& s : v) {
      table += q + "\t" + s.id + "\t" + (fx_.gold.at(q).count(s.id) ? "1" : "0") + "\n";
    }
  }
  fixtures::write(dir_ / "sem.tsv", table);
  const auto t = cli({"tune", "--run", path("r/run.tsv"), "--score-table", path("sem.tsv"),
                      "--gold", path("gold.json"), "--objective", "macro-f2", "--out-dir",
                      path("t")});
  ASSERT_EQ(t.code, kExitOk) << t.err;
  const auto csv = read_file(dir_ / "t/grid.csv");
  std::size_t rows = 0;
  for (const auto& line : split(csv, '\n')) {
    if (!line.empty() && line[0] != '#' && line.rfind("alpha", 0) != 0) ++rows;
  }
  EXPECT_EQ(rows, 2520u);
  const auto params = nlohmann::json::parse(read_file(dir_ / "t/params.json"));
  EXPECT_EQ(params.at("objective"), 1.0);
  EXPECT_GT(params.at("beta").get<double>(), 0.0);
}

TEST_F(Cli, VoteAndBinaryVote) {
  fixtures::write(dir_ / "r1.tsv", "# run: r1\nq\ta\t1\tr1\nq\tb\t0.5\tr1\n");
  fixtures::write(dir_ / "r2.tsv", "# run: r2\nq\tb\t1\tr2\nq\tc\t0.5\tr2\n");
  fixtures::write(dir_ / "r3.tsv", "# run: r3\nq\tb\t1\tr3\n");
  const auto v = cli({"vote", "--runs", path("r1.tsv"), path("r2.tsv"), path("r3.tsv"),
                      "--out-dir", path("v")});
  ASSERT_EQ(v.code, kExitOk) << v.err;
  const auto run = read_run(dir_ / "v/run.tsv");
  ASSERT_EQ(run.queries.at("q").size(), 1u);
  EXPECT_EQ(run.queries.at("q")[0].id, "b");

  fixtures::write(dir_ / "l1.tsv", "H1\tY\nH2\tN\n");
  fixtures::write(dir_ / "l2.tsv", "H1\tY\nH2\tY\n");
  fixtures::write(dir_ / "l3.tsv", "H1\tN\nH2\tN\n");
  ASSERT_EQ(cli({"vote", "--binary", "--runs", path("l1.tsv"), path("l2.tsv"), path("l3.tsv"),
                 "--out-dir", path("b")}).code,
            kExitOk);
  EXPECT_EQ(read_file(dir_ / "b/labels.tsv"), "H1\tY\nH2\tN\n");

  fixtures::write(dir_ / "bg.json", R"({"H1": "Y", "H2": "Y"})");
  const auto acc = cli({"eval", "--mode", "accuracy", "--run", path("b/labels.tsv"), "--gold",
                        path("bg.json")});
  ASSERT_EQ(acc.code, kExitOk) << acc.err;
  EXPECT_EQ(nlohmann::json::parse(acc.out).at("accuracy"), 0.5);
}

TEST_F(Cli, BuildPairsIsSeeded) {
  ASSERT_EQ(cli({"retrieve", "--task", "task3", "--phase", "train", "--corpus",
                 path("civil.jsonl"), "--queries", path("questions.jsonl"), "--out-dir",
                 path("tr")}).code,
            kExitOk);
  for (const char* out : {"p1", "p2"}) {
    ASSERT_EQ(cli({"build-pairs", "--gold", path("gold.json"), "--run", path("tr/run.tsv"),
                   "--seed", "5", "--out-dir", path(out)}).code,
              kExitOk);
  }
  const auto pairs = read_file(dir_ / "p1/pairs.tsv");
  EXPECT_EQ(pairs, read_file(dir_ / "p2/pairs.tsv"));
  std::size_t pos = 0, neg = 0;
  for (const auto& line : split(pairs, '\n')) {
    if (line.ends_with("\tpositive")) ++pos;
    if (line.ends_with("\tnegative")) ++neg;
  }
  EXPECT_EQ(pos, fx_.questions.size());
  EXPECT_EQ(neg, 2 * pos);
}

TEST_F(Cli, Task1AndTask2Directories) {
  fixtures::write(dir_ / "cases/000001.txt", "[1] The negligence claim in 2001.\n\n[2] Costs.");
  fixtures::write(dir_ / "cases/000002.txt", "[1] Contract formation in 2003.");
  fixtures::write(dir_ / "cases/000003.txt", "[1] Negligence and duty of care in 2005.");
  fixtures::write(dir_ / "base.jsonl",
                  R"({"id": "base1", "text": "[1] A negligence claim about duty of care, 2010."})"
                  "\n");
  const auto r1 = cli({"retrieve", "--task", "task1", "--corpus", path("cases"), "--queries",
                       path("base.jsonl"), "--out-dir", path("t1")});
  ASSERT_EQ(r1.code, kExitOk) << r1.err;
  const auto run1 = read_run(dir_ / "t1/run.tsv");
  EXPECT_EQ(run1.queries.at("base1").front().id, "000003.txt");

  fixtures::write(dir_ / "t2/001/entailed_fragment.txt", "The appeal is dismissed.");
  fixtures::write(dir_ / "t2/001/paragraphs/001.txt", "Facts of the matter.");
  fixtures::write(dir_ / "t2/001/paragraphs/002.txt", "The appeal is dismissed.");
  const auto r2 = cli({"retrieve", "--task", "task2", "--corpus", path("t2"), "--out-dir",
                       path("t2out")});
  ASSERT_EQ(r2.code, kExitOk) << r2.err;
  const auto run2 = read_run(dir_ / "t2out/run.tsv");
  ASSERT_EQ(run2.queries.at("001").size(), 1u);
  EXPECT_EQ(run2.queries.at("001")[0].id, "001/002.txt");
}

}  // namespace
}  // namespace lexfuse
