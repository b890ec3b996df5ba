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


#ifndef FCATTACK_REPORT_H_
#define FCATTACK_REPORT_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fcattack/evaluation.h"
#include "fcattack/experiment.h"

namespace fcattack {

// Reports are pretty-printed JSON with a fixed field order so that identical
// runs diff byte-exactly.
std::string MetricsJson(const MetricsRecord& metrics);
std::string EvaluationJson(const MetricsRecord& clean, const std::optional<MetricsRecord>& attacked);
std::string ReportJson(const ExperimentReport& report);
std::string SweepSummaryJson(const std::vector<ExperimentReport>& reports);

// Renders a report, a sweep summary or an evaluation document as a text
// table. Throws ParseError on malformed input.
std::string RenderTable(std::string_view json, const std::string& source = "<report>");

}  // namespace fcattack

#endif  // FCATTACK_REPORT_H_
