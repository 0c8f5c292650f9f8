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

#ifndef CID_DSL_HPP_
#define CID_DSL_HPP_

#include <string>
#include <vector>

#include "json.hpp"

#include "cid/model.hpp"

namespace cid {

// 1-based position of an offending region in DSL text. For JSON input the
// span is unused and `pointer` carries a JSON pointer instead.
struct SourceSpan {
  int line = 0;
  int column = 0;
  int length = 0;
};

struct ParseIssue {
  SourceSpan span;
  std::string pointer;  // JSON inputs only
  std::string message;
  std::vector<std::string> expected;  // token kinds that would have been legal
};

// kParse error carrying a structured issue.
class DslError : public CidError {
 public:
  explicit DslError(ParseIssue issue);
  const ParseIssue& issue() const { return issue_; }

 private:
  static std::string Format(const ParseIssue& issue);
  ParseIssue issue_;
};

// Parses model text. The strict variant additionally requires the model to
// validate, reporting the first violation at the offending declaration.
CidModel ParseModel(const std::string& text);
CidModel ParseModelLax(const std::string& text);

// Canonical text form: agents first, nodes in declaration order, expanded
// rows in canonical order, canonical number rendering, LF line endings.
// serialize(parse(serialize(m))) == serialize(m).
std::string SerializeModel(const CidModel& model);

// JSON mirror of the same structure.
nlohmann::json ModelToJson(const CidModel& model);
CidModel ModelFromJson(const nlohmann::json& doc);
CidModel ModelFromJsonLax(const nlohmann::json& doc);

nlohmann::json ValidationToJson(const ValidationReport& report);

// Policy exchange format: {"D": [{"when": [...], "do": <action>}, ...]}
// where <action> is an action name or {"dist": {"a": p, ...}}. Row keys may
// use "_" wildcards on input (first match wins); output rows are expanded.
nlohmann::json PolicyToJson(const CidModel& model, const PolicyProfile& profile);
PolicyProfile PolicyFromJson(const CidModel& model, const nlohmann::json& doc);

}  // namespace cid

#endif  // CID_DSL_HPP_
