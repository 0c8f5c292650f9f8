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

#include "cid.h"

#include <cstdlib>
#include <cstring>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cid/common.hpp"
#include "cid/counterfactual.hpp"
#include "cid/dot.hpp"
#include "cid/dsl.hpp"
#include "cid/incentives.hpp"
#include "cid/inference.hpp"
#include "cid/model.hpp"
#include "cid/reports.hpp"
#include "cid/solve.hpp"
#include "cid/zoo.hpp"

struct cid_model {
  cid::CidModel impl;
};

namespace {

thread_local std::string g_error;

cid_status MapCode(cid::ErrorCode code) {
  switch (code) {
    case cid::ErrorCode::kParse:
      return CID_PARSE_ERROR;
    case cid::ErrorCode::kValidation:
      return CID_VALIDATION_ERROR;
    case cid::ErrorCode::kUsage:
      return CID_USAGE_ERROR;
    case cid::ErrorCode::kResource:
      return CID_RESOURCE_LIMIT;
    case cid::ErrorCode::kEvidence:
      return CID_IMPOSSIBLE_EVIDENCE;
    case cid::ErrorCode::kInternal:
      return CID_INTERNAL_ERROR;
  }
  return CID_INTERNAL_ERROR;
}

template <typename Fn>
cid_status Guard(Fn&& fn) {
  try {
    fn();
    g_error.clear();
    return CID_OK;
  } catch (const cid::CidError& e) {
    g_error = e.what();
    return MapCode(e.code());
  } catch (const std::exception& e) {
    g_error = e.what();
    return CID_INTERNAL_ERROR;
  }
}

char* Dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void Emit(const nlohmann::json& doc, char** out) { *out = Dup(doc.dump(2)); }

const char* Required(const char* value, const char* what) {
  if (value == nullptr) {
    cid::Fail(cid::ErrorCode::kUsage, std::string(what) + " must not be null");
  }
  return value;
}

const cid::CidModel& Impl(const cid_model* model) {
  if (model == nullptr) {
    cid::Fail(cid::ErrorCode::kUsage, "model must not be null");
  }
  return model->impl;
}

std::vector<std::string> SplitCsv(const char* csv) {
  std::vector<std::string> out;
  if (csv == nullptr) return out;
  std::string text = csv;
  size_t start = 0;
  while (start <= text.size()) {
    size_t comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    std::string item = text.substr(start, comma - start);
    if (!item.empty()) out.push_back(item);
    start = comma + 1;
  }
  return out;
}

std::map<std::string, std::string> SplitPairs(const char* csv,
                                              const char* what) {
  std::map<std::string, std::string> out;
  for (const std::string& item : SplitCsv(csv)) {
    size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      cid::Fail(cid::ErrorCode::kUsage,
                std::string(what) + ": expected key=value, got '" + item + "'");
    }
    out[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

nlohmann::json ParseJson(const char* text, const char* what) {
  nlohmann::json doc = nlohmann::json::parse(Required(text, what), nullptr,
                                             /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    cid::Fail(cid::ErrorCode::kParse, std::string(what) + ": invalid JSON");
  }
  return doc;
}

cid::SolveMethod MethodFromName(const char* method) {
  if (method == nullptr) return cid::SolveMethod::kAuto;
  std::string name = method;
  if (name.empty() || name == "auto") return cid::SolveMethod::kAuto;
  if (name == "exhaustive") return cid::SolveMethod::kExhaustive;
  if (name == "backward") return cid::SolveMethod::kBackward;
  cid::Fail(cid::ErrorCode::kUsage,
            "unknown method '" + name + "' (auto, exhaustive, backward)");
}

cid_status Load(cid::CidModel model, cid_model** out) {
  *out = new cid_model{std::move(model)};
  g_error.clear();
  return CID_OK;
}

}  // namespace

extern "C" {

const char* cid_version(void) { return "0.1.0"; }

const char* cid_last_error(void) { return g_error.c_str(); }

void cid_string_free(char* s) { std::free(s); }

void cid_model_free(cid_model* model) { delete model; }

void cid_set_max_factor_entries(uint64_t n) { cid::SetMaxFactorEntries(n); }
void cid_set_max_policies(uint64_t n) { cid::SetMaxPolicies(n); }
uint64_t cid_get_max_factor_entries(void) { return cid::MaxFactorEntries(); }
uint64_t cid_get_max_policies(void) { return cid::MaxPolicies(); }

cid_status cid_model_parse(const char* text, cid_model** out) {
  return Guard([&] {
    *out = nullptr;
    Load(cid::ParseModel(Required(text, "text")), out);
  });
}

cid_status cid_model_parse_lax(const char* text, cid_model** out) {
  return Guard([&] {
    *out = nullptr;
    Load(cid::ParseModelLax(Required(text, "text")), out);
  });
}

cid_status cid_model_from_json(const char* text, cid_model** out) {
  return Guard([&] {
    *out = nullptr;
    Load(cid::ModelFromJson(ParseJson(text, "model JSON")), out);
  });
}

cid_status cid_model_from_json_lax(const char* text, cid_model** out) {
  return Guard([&] {
    *out = nullptr;
    Load(cid::ModelFromJsonLax(ParseJson(text, "model JSON")), out);
  });
}

cid_status cid_model_serialize(const cid_model* model, char** out) {
  return Guard([&] { *out = Dup(cid::SerializeModel(Impl(model))); });
}

cid_status cid_model_to_json(const cid_model* model, char** out) {
  return Guard([&] { Emit(cid::ModelToJson(Impl(model)), out); });
}

cid_status cid_model_validate(const cid_model* model, int* ok,
                              char** report_json) {
  return Guard([&] {
    const cid::ValidationReport& report = Impl(model).Validation();
    if (ok != nullptr) *ok = report.ok ? 1 : 0;
    Emit(cid::ValidationToJson(report), report_json);
  });
}

cid_status cid_model_dot(const cid_model* model, int color_agents, char** out) {
  return Guard(
      [&] { *out = Dup(cid::ExportDot(Impl(model), color_agents != 0)); });
}

cid_status cid_solve(const cid_model* model, const char* agent,
                     const char* method, char** report_json) {
  return Guard([&] {
    std::string name = Required(agent, "agent");
    cid::SolveResult res =
        cid::SolveSingleAgent(Impl(model), name, MethodFromName(method));
    Emit(cid::SolveReportJson(Impl(model), name, res), report_json);
  });
}

cid_status cid_expected_utility(const cid_model* model,
                                const char* policy_json, const char* agent,
                                char** report_json) {
  return Guard([&] {
    std::string name = Required(agent, "agent");
    cid::PolicyProfile profile =
        cid::PolicyFromJson(Impl(model), ParseJson(policy_json, "policy JSON"));
    double value = cid::ExpectedUtility(Impl(model), profile, name);
    Emit(cid::EuReportJson(name, value), report_json);
  });
}

cid_status cid_dsep(const cid_model* model, const char* x_csv,
                    const char* y_csv, const char* given_csv,
                    char** report_json) {
  return Guard([&] {
    std::vector<std::string> xs = SplitCsv(Required(x_csv, "x"));
    std::vector<std::string> ys = SplitCsv(Required(y_csv, "y"));
    std::vector<std::string> zs = SplitCsv(given_csv);
    bool separated = cid::DSeparated(Impl(model), xs, ys, zs);
    std::optional<std::vector<std::string>> witness;
    if (!separated) witness = cid::FindActivePath(Impl(model), xs, ys, zs);
    Emit(cid::DsepReportJson(xs, ys, zs, separated, witness), report_json);
  });
}

cid_status cid_mediates(const cid_model* model, const char* from,
                        const char* to, const char* via_csv,
                        char** report_json) {
  return Guard([&] {
    std::vector<std::string> via = SplitCsv(via_csv);
    bool result = cid::Mediates(Impl(model), Required(from, "from"),
                                Required(to, "to"), via);
    Emit(cid::MediatesReportJson(from, to, via, result), report_json);
  });
}

cid_status cid_incentives(const cid_model* model, const char* decision,
                          char** report_json) {
  return Guard([&] {
    cid::DiagnosticReport report = cid::SelfFulfillingDiagnostic(
        Impl(model), Required(decision, "decision"));
    Emit(cid::IncentivesReportJson(report), report_json);
  });
}

cid_status cid_value_of_information(const cid_model* model, const char* agent,
                                    const char* decision, const char* obs,
                                    char** report_json) {
  return Guard([&] {
    double value = cid::ValueOfInformation(
        Impl(model), Required(agent, "agent"), Required(decision, "decision"),
        Required(obs, "obs"));
    Emit(cid::VoiReportJson(agent, decision, obs, value), report_json);
  });
}

cid_status cid_pure_nash(const cid_model* model, char** report_json) {
  return Guard([&] {
    std::vector<cid::SolveResult> eqs = cid::PureNashEquilibria(Impl(model));
    Emit(cid::NashReportJson(Impl(model), eqs), report_json);
  });
}

cid_status cid_twin(const cid_model* model, const char* do_csv,
                    cid_model** out) {
  return Guard([&] {
    *out = nullptr;
    cid::InterventionSpec spec;
    spec.force = SplitPairs(do_csv, "do list");
    cid::ScmModel scm = cid::Functionalize(Impl(model));
    Load(cid::TwinNetwork(scm, spec), out);
  });
}

cid_status cid_zoo_list(char** report_json) {
  return Guard([&] { Emit(cid::ZooListJson(), report_json); });
}

cid_status cid_zoo_build(const char* name, const char* params_csv,
                         cid_model** out) {
  return Guard([&] {
    *out = nullptr;
    Load(cid::ZooBuild(Required(name, "name"),
                       SplitPairs(params_csv, "params")),
         out);
  });
}

cid_status cid_zoo_manifest(const char* name, char** manifest_json) {
  return Guard(
      [&] { *manifest_json = Dup(cid::ZooManifest(Required(name, "name"))); });
}

cid_status cid_wireheading_report(const char* params_csv, char** report_json) {
  return Guard([&] {
    cid::WireheadingReport report =
        cid::WireheadingExperiment(SplitPairs(params_csv, "params"));
    Emit(cid::WireheadingReportJson(report), report_json);
  });
}

}  // extern "C"
