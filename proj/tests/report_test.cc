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


#include "fcattack/report.h"

#include <gtest/gtest.h>

#include "fcattack/errors.h"
#include "json.hpp"

namespace fcattack {
namespace {

MetricsRecord Sample() {
  MetricsRecord m;
  m.counts = {4, 2, 0};
  m.correct = {3, 1, 0};
  m.accuracy = {75.0, 50.0, std::nullopt};
  m.attack_recall = 62.5;
  m.attacked_claims = 6;
  m.changed = 2;
  return m;
}

TEST(ReportTest, MetricsJsonFieldOrderAndNulls) {
  const auto j = nlohmann::ordered_json::parse(MetricsJson(Sample()));
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"counts", "correct", "accuracy", "attack_recall",
                                            "to_nei_ratio", "attacked_claims", "changed"}));
  EXPECT_TRUE(j["accuracy"]["NEI"].is_null());
  EXPECT_TRUE(j["to_nei_ratio"].is_null());
  EXPECT_EQ(j["counts"]["SUP"], 4);
  EXPECT_EQ(MetricsJson(Sample()), MetricsJson(Sample()));
}

TEST(ReportTest, RenderEvaluationTable) {
  const std::string table = RenderTable(EvaluationJson(Sample(), Sample()));
  EXPECT_NE(table.find("clean"), std::string::npos);
  EXPECT_NE(table.find("attacked"), std::string::npos);
  EXPECT_NE(table.find("75.0"), std::string::npos);
  EXPECT_NE(table.find("62.5"), std::string::npos);
  const std::string clean_only = RenderTable(EvaluationJson(Sample(), std::nullopt));
  EXPECT_EQ(clean_only.find("attacked"), std::string::npos);
}

TEST(ReportTest, RenderSweepSummary) {
  ExperimentReport r;
  r.config.name = "main/imperceptible";
  r.attacked = Sample();
  r.reference.push_back({"main-results", "SUP", 12.0});
  r.reference.push_back({"other", "SUP", 99.0});
  const std::string summary = SweepSummaryJson({r, r});
  const std::string table = RenderTable(summary);
  size_t rows = 0;
  for (size_t at = table.find("main/imperceptible"); at != std::string::npos;
       at = table.find("main/imperceptible", at + 1)) {
    ++rows;
  }
  EXPECT_EQ(rows, 2u);
  EXPECT_NE(table.find("[reference SUP 12.0]"), std::string::npos);
  EXPECT_EQ(table.find("99.0"), std::string::npos);
  EXPECT_EQ(RenderTable(ReportJson(r)).find("main/imperceptible") != std::string::npos, true);
}

TEST(ReportTest, MalformedInputThrows) {
  EXPECT_THROW(RenderTable("not json"), ParseError);
  EXPECT_THROW(RenderTable("{\"unrelated\": 1}"), ParseError);
  EXPECT_THROW(RenderTable("{\"clean\": {\"accuracy\": 3}, \"attacked\": null}"), ParseError);
}

}  // namespace
}  // namespace fcattack
