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

#include <cstdio>
#include <sstream>

#include "fcattack/errors.h"
#include "json.hpp"

namespace fcattack {

namespace {

using Json = nlohmann::ordered_json;

Json Optional(const std::optional<double>& value) {
  return value ? Json(*value) : Json(nullptr);
}

Json PerLabel(const std::array<size_t, 3>& values) {
  Json j = Json::object();
  for (Label l : kAllLabels) j[std::string(LabelName(l))] = values[LabelIndex(l)];
  return j;
}

Json Metrics(const MetricsRecord& m) {
  Json j;
  j["counts"] = PerLabel(m.counts);
  j["correct"] = PerLabel(m.correct);
  Json accuracy = Json::object();
  for (Label l : kAllLabels) accuracy[std::string(LabelName(l))] = Optional(m.accuracy[LabelIndex(l)]);
  j["accuracy"] = accuracy;
  j["attack_recall"] = Optional(m.attack_recall);
  j["to_nei_ratio"] = Optional(m.to_nei_ratio);
  j["attacked_claims"] = m.attacked_claims;
  j["changed"] = m.changed;
  return j;
}

Json HistogramJson(const std::optional<Histogram>& h) {
  if (!h) return nullptr;
  Json j;
  j["edges"] = h->edges;
  j["counts"] = h->counts;
  return j;
}

Json TraversalJson(const std::optional<Histogram2D>& h) {
  if (!h) return nullptr;
  Json rows = Json::array();
  for (size_t b = 0; b < h->bins; ++b) {
    rows.push_back(std::vector<size_t>(h->counts.begin() + static_cast<long>(b * h->bins),
                                       h->counts.begin() + static_cast<long>((b + 1) * h->bins)));
  }
  Json j;
  j["bins"] = h->bins;
  j["counts"] = rows;
  return j;
}

Json ParaphraseJson(const std::optional<ParaphraseRobustnessReport>& p) {
  if (!p) return nullptr;
  Json j;
  j["considered"] = p->considered;
  j["survived"] = p->survived;
  j["survival"] = p->considered ? Json(100.0 * static_cast<double>(p->survived) /
                                       static_cast<double>(p->considered))
                                : Json(nullptr);
  j["original"] = Metrics(p->original_attacked);
  j["paraphrased"] = Metrics(p->paraphrased_attacked);
  Json gap = Json::object();
  for (Label l : kAllLabels) {
    const auto& a = p->original_attacked.accuracy[LabelIndex(l)];
    const auto& b = p->paraphrased_attacked.accuracy[LabelIndex(l)];
    gap[std::string(LabelName(l))] = a && b ? Json(*b - *a) : Json(nullptr);
  }
  j["accuracy_gap"] = gap;
  j["dropped"] = p->dropped;
  return j;
}

Json ReportObject(const ExperimentReport& r) {
  Json j;
  j["name"] = r.config.name;
  j["config"] = Json::parse(ExperimentConfigJson(r.config));
  Json taxonomy;
  taxonomy["target"] = AttackTargetName(r.coordinates.target);
  taxonomy["modification"] = ModificationKindName(r.coordinates.modification);
  taxonomy["context"] = ContextClassName(r.coordinates.context);
  taxonomy["capability"] = ModelCapabilityName(r.coordinates.capability);
  taxonomy["knowledge"] = KnowledgeName(r.coordinates.knowledge);
  taxonomy["data_fraction"] = r.coordinates.data_fraction;
  j["taxonomy"] = taxonomy;
  j["target_claims"] = r.target_claims;
  j["attempted_sentences"] = r.attempted_sentences;
  j["successful_sentences"] = r.successful_sentences;
  j["clean"] = Metrics(r.clean);
  j["attacked"] = Metrics(r.attacked);
  j["attack_distance"] = HistogramJson(r.attack_distance);
  j["gold_distance"] = HistogramJson(r.gold_distance);
  j["confidence_traversal"] = TraversalJson(r.traversal);
  j["paraphrase"] = ParaphraseJson(r.paraphrase);
  Json reference = Json::array();
  for (const ReferenceValue& v : r.reference) {
    reference.push_back({{"source", v.source}, {"field", v.field}, {"value", v.value}});
  }
  j["reference_not_reproduced"] = reference;
  return j;
}

std::string Dump(const Json& j) { return j.dump(2) + "\n"; }

std::string Cell(const Json& value) {
  if (value.is_null()) return "-";
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.1f", value.get<double>());
  return buffer;
}

void Row(std::ostringstream& out, const std::string& name, const std::vector<std::string>& cells,
         const std::string& tail) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%-48s", name.c_str());
  out << buffer;
  for (const std::string& c : cells) {
    std::snprintf(buffer, sizeof(buffer), " %8s", c.c_str());
    out << buffer;
  }
  if (!tail.empty()) out << "  " << tail;
  out << "\n";
}

void MetricsRow(std::ostringstream& out, const std::string& name, const Json& m,
                const std::string& tail) {
  const Json& acc = m.at("accuracy");
  Row(out, name,
      {Cell(acc.at("SUP")), Cell(acc.at("REF")), Cell(acc.at("NEI")), Cell(m.at("attack_recall")),
       Cell(m.at("to_nei_ratio"))},
      tail);
}

std::string ReferenceText(const Json& reference) {
  std::string out;
  for (const Json& v : reference) {
    if (v.at("source").get<std::string>() != "main-results") continue;
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%s%s %.1f", out.empty() ? "" : " ",
                  v.at("field").get<std::string>().c_str(), v.at("value").get<double>());
    out += buffer;
  }
  return out.empty() ? out : "[reference " + out + "]";
}

void RenderReport(std::ostringstream& out, const Json& r) {
  MetricsRow(out, r.at("name").get<std::string>(), r.at("attacked"),
             ReferenceText(r.at("reference_not_reproduced")));
  const Json& p = r.at("paraphrase");
  if (!p.is_null()) {
    MetricsRow(out, "  original claims", p.at("original"), "");
    MetricsRow(out, "  paraphrased claims", p.at("paraphrased"),
               "survival " + Cell(p.at("survival")) + "%");
  }
}

}  // namespace

std::string MetricsJson(const MetricsRecord& metrics) { return Dump(Metrics(metrics)); }

std::string EvaluationJson(const MetricsRecord& clean, const std::optional<MetricsRecord>& attacked) {
  Json j;
  j["clean"] = Metrics(clean);
  j["attacked"] = attacked ? Metrics(*attacked) : Json(nullptr);
  return Dump(j);
}

std::string ReportJson(const ExperimentReport& report) { return Dump(ReportObject(report)); }

std::string SweepSummaryJson(const std::vector<ExperimentReport>& reports) {
  Json j;
  Json list = Json::array();
  for (const ExperimentReport& r : reports) list.push_back(ReportObject(r));
  j["reports"] = list;
  return Dump(j);
}

std::string RenderTable(std::string_view text, const std::string& source) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(source, 0, e.what());
  }
  std::ostringstream out;
  try {
    Row(out, "run", {"SUP", "REF", "NEI", "recall", "to-NEI"}, "");
    if (j.contains("reports")) {
      for (const Json& r : j.at("reports")) RenderReport(out, r);
    } else if (j.contains("name")) {
      RenderReport(out, j);
    } else if (j.contains("clean")) {
      MetricsRow(out, "clean", j.at("clean"), "");
      if (!j.at("attacked").is_null()) MetricsRow(out, "attacked", j.at("attacked"), "");
    } else {
      throw ParseError(source, 0, "not a report, sweep summary or evaluation document");
    }
  } catch (const Json::exception& e) {
    throw ParseError(source, 0, e.what());
  }
  return out.str();
}

}  // namespace fcattack
