// Copyright 2026 The CID Engine Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cid/reports.hpp"

#include "cid/dsl.hpp"

namespace cid {

using nlohmann::json;

json SolveReportJson(const CidModel& model, const std::string& agent,
                     const SolveResult& res) {
  json doc;
  doc["agent"] = agent;
  doc["method"] = MethodName(res.method);
  doc["explored"] = res.explored;
  doc["value"] = json::object();
  for (const auto& [name, v] : res.value) doc["value"][name] = v;
  doc["policy"] = PolicyToJson(model, res.profile);
  return doc;
}

json NashReportJson(const CidModel& model,
                    const std::vector<SolveResult>& equilibria) {
  json doc;
  doc["count"] = equilibria.size();
  doc["explored"] = equilibria.empty() ? json() : json(equilibria[0].explored);
  doc["equilibria"] = json::array();
  for (const SolveResult& eq : equilibria) {
    json entry;
    entry["policy"] = PolicyToJson(model, eq.profile);
    entry["value"] = json::object();
    for (const auto& [name, v] : eq.value) entry["value"][name] = v;
    doc["equilibria"].push_back(std::move(entry));
  }
  return doc;
}

json EuReportJson(const std::string& agent, double value) {
  json doc;
  doc["agent"] = agent;
  doc["value"] = value;
  return doc;
}

json DsepReportJson(const std::vector<std::string>& xs,
                    const std::vector<std::string>& ys,
                    const std::vector<std::string>& zs, bool separated,
                    const std::optional<std::vector<std::string>>& witness) {
  json doc;
  doc["x"] = xs;
  doc["y"] = ys;
  doc["given"] = zs;
  doc["separated"] = separated;
  doc["witness"] = witness ? json(*witness) : json();
  return doc;
}

json MediatesReportJson(const std::string& from, const std::string& to,
                        const std::vector<std::string>& via, bool mediates) {
  json doc;
  doc["from"] = from;
  doc["to"] = to;
  doc["via"] = via;
  doc["mediates"] = mediates;
  return doc;
}

json FindingJson(const IncentiveFinding& finding) {
  json doc;
  doc["decision"] = finding.decision;
  doc["subject"] = finding.subject;
  doc["kind"] = IncentiveKindName(finding.kind);
  doc["witness"] = finding.present ? json(finding.witness) : json();
  return doc;
}

json IncentivesReportJson(const DiagnosticReport& report) {
  json doc;
  doc["decision"] = report.decision;
  doc["flagged"] = json::array();
  for (const DiagnosticFlag& flag : report.flagged) {
    json entry;
    entry["subject"] = flag.subject;
    entry["ability"] = FindingJson(flag.ability);
    entry["control"] = FindingJson(flag.control);
    doc["flagged"].push_back(std::move(entry));
  }
  return doc;
}

json VoiReportJson(const std::string& agent, const std::string& decision,
                   const std::string& obs, double value) {
  json doc;
  doc["agent"] = agent;
  doc["decision"] = decision;
  doc["observation"] = obs;
  doc["value"] = value;
  return doc;
}

json ZooListJson() {
  json doc = json::array();
  for (const ZooEntryInfo& info : ZooList()) {
    json entry;
    entry["name"] = info.name;
    entry["title"] = info.title;
    entry["params"] = json::object();
    for (const auto& [key, value] : info.defaults) entry["params"][key] = value;
    doc.push_back(std::move(entry));
  }
  return doc;
}

json WireheadingReportJson(const WireheadingReport& report) {
  auto arm = [&](const char* entry, const WireheadingArm& a) {
    json doc;
    doc["value"] = a.value;
    doc["first_action"] = a.first_action;
    doc["tampers"] = a.tampers;
    doc["policy"] = PolicyToJson(ZooBuild(entry, report.params), a.policy);
    return doc;
  };
  json doc;
  doc["params"] = json::object();
  for (const auto& [key, value] : report.params) doc["params"][key] = value;
  doc["modifiable_rf"] = arm("modifiable_rf", report.modifiable);
  doc["current_rf"] = arm("current_rf", report.current);
  return doc;
}

}  // namespace cid
