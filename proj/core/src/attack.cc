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


#include "fcattack/attack.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>

#include "fcattack/errors.h"
#include "json.hpp"

namespace fcattack {
namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

template <typename T>
T Get(const json& record, const char* name, const std::string& source, size_t line) {
  auto it = record.find(name);
  if (it == record.end()) throw ParseError(source, line, std::string("missing field '") + name + "'");
  try {
    return it->get<T>();
  } catch (const json::type_error&) {
    throw ParseError(source, line, std::string("field '") + name + "' has the wrong type");
  }
}

const json& Array(const json& record, const char* name, const std::string& source, size_t line) {
  auto it = record.find(name);
  if (it == record.end() || !it->is_array()) {
    throw ParseError(source, line, std::string("field '") + name + "' must be a list");
  }
  return *it;
}

}  // namespace

std::vector<AttackRecord> ParseAttackRecords(std::istream& in, const std::string& source) {
  std::vector<AttackRecord> records;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(source, line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError(source, line_no, "record must be an object");
    AttackRecord r;
    try {
      r.claim_id = Get<std::string>(j, "claim_id", source, line_no);
      r.attacked = Get<bool>(j, "attacked", source, line_no);
      r.note = Get<std::string>(j, "note", source, line_no);
      for (const json& e : Array(j, "edits", source, line_no)) {
        PerturbedEvidence p;
        const std::string ref = Get<std::string>(e, "ref", source, line_no);
        if (!ref.empty()) p.ref = SentenceRef::Parse(ref);
        p.original = Get<std::string>(e, "original", source, line_no);
        p.attacked = Get<std::string>(e, "attacked", source, line_no);
        p.method = Get<std::string>(e, "method", source, line_no);
        p.budget_used = Get<int>(e, "budget_used", source, line_no);
        p.objective_before = Get<double>(e, "objective_before", source, line_no);
        p.objective_after = Get<double>(e, "objective_after", source, line_no);
        p.failed = Get<bool>(e, "failed", source, line_no);
        r.edits.push_back(std::move(p));
      }
      for (const json& m : Array(j, "modifications", source, line_no)) {
        Modification mod;
        mod.kind = ParseModificationKind(Get<std::string>(m, "kind", source, line_no));
        mod.target = SentenceRef::Parse(Get<std::string>(m, "target", source, line_no));
        mod.new_text = Get<std::string>(m, "text", source, line_no);
        r.modifications.push_back(std::move(mod));
      }
      for (const json& a : Array(j, "applied", source, line_no)) {
        if (!a.is_string()) throw ParseError(source, line_no, "applied entries must be strings");
        r.applied.push_back(SentenceRef::Parse(a.get<std::string>()));
      }
    } catch (const ValidationError& e) {
      throw ParseError(source, line_no, e.what());
    } catch (const ConfigError& e) {
      throw ParseError(source, line_no, e.what());
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<AttackRecord> LoadAttackRecords(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return ParseAttackRecords(in, path);
}

void WriteAttackRecords(const std::vector<AttackRecord>& records, std::ostream& out) {
  for (const AttackRecord& r : records) {
    ojson j;
    j["claim_id"] = r.claim_id;
    j["attacked"] = r.attacked;
    j["note"] = r.note;
    ojson edits = ojson::array();
    for (const PerturbedEvidence& p : r.edits) {
      ojson e;
      e["ref"] = p.ref.doc_id.empty() ? std::string() : p.ref.ToString();
      e["original"] = p.original;
      e["attacked"] = p.attacked;
      e["method"] = p.method;
      e["budget_used"] = p.budget_used;
      e["objective_before"] = p.objective_before;
      e["objective_after"] = p.objective_after;
      e["failed"] = p.failed;
      edits.push_back(std::move(e));
    }
    j["edits"] = std::move(edits);
    ojson mods = ojson::array();
    for (const Modification& m : r.modifications) {
      ojson e;
      e["kind"] = std::string(ModificationKindName(m.kind));
      e["target"] = m.target.ToString();
      e["text"] = m.new_text;
      mods.push_back(std::move(e));
    }
    j["modifications"] = std::move(mods);
    ojson applied = ojson::array();
    for (const SentenceRef& ref : r.applied) applied.push_back(ref.ToString());
    j["applied"] = std::move(applied);
    out << j.dump() << '\n';
  }
}

void SaveAttackRecords(const std::vector<AttackRecord>& records, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  WriteAttackRecords(records, out);
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace fcattack
