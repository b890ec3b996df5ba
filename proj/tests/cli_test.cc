// Copyright 2026 The fcattack Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace {

namespace fs = std::filesystem;

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    root_ = fs::temp_directory_path() / ("fcattack-cli-" + std::to_string(::getpid()));
    fs::remove_all(root_);
    fs::create_directories(root_);
    ASSERT_EQ(Run("gen-corpus --sup 20 --ref 20 --nei 20 --seed 3"), 0);
    ASSERT_EQ(Run("train"), 0);
  }
  static void TearDownTestSuite() { fs::remove_all(root_); }

  // Exit status of the CLI with FCATTACK_OUT pointing at the suite directory.
  static int Run(const std::string& args) {
    const std::string cmd = "FCATTACK_OUT='" + root_.string() + "' '" FCATTACK_CLI_PATH "' " + args +
                            " > '" + (root_ / "last.log").string() + "' 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  static std::string Log() { return Slurp(root_ / "last.log"); }

  static fs::path root_;
};

fs::path CliTest::root_;

TEST_F(CliTest, GenCorpusLayoutAndEcho) {
  for (const char* f : {"repo.jsonl", "claims.train.jsonl", "claims.eval.jsonl", "lexicon.txt",
                        "token_pool.txt", "paraphrases.txt", "counterclaims.jsonl", "config.json"}) {
    EXPECT_TRUE(fs::exists(root_ / "corpus" / f)) << f;
  }
  EXPECT_TRUE(fs::exists(root_ / "train" / "verifier.txt"));
  EXPECT_NE(Slurp(root_ / "corpus" / "config.json").find("\"gen-corpus\""), std::string::npos);
}

TEST_F(CliTest, AttackAndEvalAreDeterministic) {
  ASSERT_EQ(Run("attack --method imperceptible --epsilon 6 --out " + (root_ / "a1").string()), 0) << Log();
  ASSERT_EQ(Run("attack --method imperceptible --epsilon 6 --out " + (root_ / "a2").string()), 0) << Log();
  EXPECT_EQ(Slurp(root_ / "a1" / "records.jsonl"), Slurp(root_ / "a2" / "records.jsonl"));
  EXPECT_EQ(Slurp(root_ / "a1" / "repo.jsonl"), Slurp(root_ / "a2" / "repo.jsonl"));
  EXPECT_TRUE(fs::exists(root_ / "a1" / "config.json"));
  EXPECT_TRUE(fs::exists(root_ / "a1" / "experiment.json"));

  ASSERT_EQ(Run("eval --attack " + (root_ / "a1").string()), 0) << Log();
  EXPECT_TRUE(fs::exists(root_ / "eval" / "eval.json"));
  EXPECT_TRUE(fs::exists(root_ / "eval" / "predictions.jsonl"));
  EXPECT_TRUE(fs::exists(root_ / "eval" / "config.json"));
  ASSERT_EQ(Run("report --in " + (root_ / "eval" / "eval.json").string()), 0);
  EXPECT_NE(Log().find("attacked"), std::string::npos);

  // Re-running from the written experiment config reproduces the records.
  ASSERT_EQ(Run("attack --config " + (root_ / "a1" / "experiment.json").string() + " --out " +
                (root_ / "a3").string()),
            0)
      << Log();
  EXPECT_EQ(Slurp(root_ / "a1" / "records.jsonl"), Slurp(root_ / "a3" / "records.jsonl"));
}

TEST_F(CliTest, TaxonomyConflictExitsTwo) {
  EXPECT_EQ(Run("attack --method lexical-variation --modify add"), 2);
  EXPECT_NE(Log().find("replace"), std::string::npos);
  EXPECT_FALSE(fs::exists(root_ / "attack" / "records.jsonl"));
}

TEST_F(CliTest, PlantingDefaultsToAdd) {
  ASSERT_EQ(Run("attack --method supporting-generation --n-samples 8 --out " + (root_ / "p1").string()), 0)
      << Log();
  EXPECT_NE(Slurp(root_ / "p1" / "experiment.json").find("\"modification\": \"add\""), std::string::npos);
  ASSERT_EQ(Run("attack --method imperceptible --out " + (root_ / "p2").string()), 0) << Log();
  EXPECT_NE(Slurp(root_ / "p2" / "experiment.json").find("\"modification\": \"replace\""),
            std::string::npos);
}

TEST_F(CliTest, ValidationErrorsExitTwo) {
  EXPECT_EQ(Run("attack --bogus"), 2);
  EXPECT_EQ(Run("attack --method imperceptible --epsilon -3"), 2);
  EXPECT_EQ(Run("attack --method telepathy"), 2);
  EXPECT_EQ(Run("sweep --groups nonsense"), 2);
  EXPECT_EQ(Run(""), 2);
  EXPECT_EQ(Run("eval --scope global"), 2);
}

TEST_F(CliTest, IoErrorsExitOne) {
  EXPECT_EQ(Run("eval --verifier /nonexistent/verifier.txt"), 1);
  EXPECT_EQ(Run("index --corpus /nonexistent/corpus"), 1);
  EXPECT_EQ(Run("report --in /nonexistent/report.json"), 1);
}

TEST_F(CliTest, HelpExitsZero) {
  EXPECT_EQ(Run("--help"), 0);
  EXPECT_EQ(Run("sweep --list --groups budget"), 0);
  EXPECT_NE(Log().find("budget/"), std::string::npos);
}

TEST_F(CliTest, ExportDistantSupervision) {
  ASSERT_EQ(Run("export-distant-supervision --masker retrieval"), 0) << Log();
  const std::string out = Slurp(root_ / "distant-supervision" / "distant_supervision.jsonl");
  EXPECT_NE(out.find("\"masked_evidence\""), std::string::npos);
}

}  // namespace
