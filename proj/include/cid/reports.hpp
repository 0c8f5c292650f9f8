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

#ifndef CID_REPORTS_HPP_
#define CID_REPORTS_HPP_

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cid/incentives.hpp"
#include "cid/model.hpp"
#include "cid/solve.hpp"
#include "cid/zoo.hpp"

namespace cid {

// Canonical JSON reports shared by the C API, the command line, and golden
// tests. Keys are emitted sorted; render with dump(2).

nlohmann::json SolveReportJson(const CidModel& model, const std::string& agent,
                               const SolveResult& res);
nlohmann::json NashReportJson(const CidModel& model,
                              const std::vector<SolveResult>& equilibria);
nlohmann::json EuReportJson(const std::string& agent, double value);
nlohmann::json DsepReportJson(const std::vector<std::string>& xs,
                              const std::vector<std::string>& ys,
                              const std::vector<std::string>& zs,
                              bool separated,
                              const std::optional<std::vector<std::string>>& witness);
nlohmann::json MediatesReportJson(const std::string& from, const std::string& to,
                                  const std::vector<std::string>& via,
                                  bool mediates);
nlohmann::json FindingJson(const IncentiveFinding& finding);
nlohmann::json IncentivesReportJson(const DiagnosticReport& report);
nlohmann::json VoiReportJson(const std::string& agent, const std::string& decision,
                             const std::string& obs, double value);
nlohmann::json ZooListJson();
nlohmann::json WireheadingReportJson(const WireheadingReport& report);

}  // namespace cid

#endif  // CID_REPORTS_HPP_
