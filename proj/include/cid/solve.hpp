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

#ifndef CID_SOLVE_HPP_
#define CID_SOLVE_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cid/model.hpp"

namespace cid {

enum class SolveMethod { kAuto, kExhaustive, kBackward };

const char* MethodName(SolveMethod method);

// `value` is recomputed from the returned profile for every agent, so it
// always agrees with ExpectedUtility. `explored` counts enumerated pure
// policies (exhaustive) or solved decision rows (backward induction).
struct SolveResult {
  PolicyProfile profile;
  std::map<std::string, double> value;
  SolveMethod method = SolveMethod::kExhaustive;
  std::int64_t explored = 0;
};

struct RecallFailure {
  std::string later;    // the decision missing an observation
  std::string missing;  // what it fails to observe
};

// Certifies the order used by backward induction: each later decision of the
// agent must observe every earlier decision and all of that decision's
// parents. `order` lists the agent's decisions in topological order.
struct RecallCertificate {
  bool ok = true;
  std::vector<std::string> order;
  std::vector<RecallFailure> failures;
};

RecallCertificate CheckSufficientRecall(const CidModel& model,
                                        const std::string& agent);

// Maximizes `agent`'s expected utility over pure policies for its decisions.
// Decisions of other agents must be covered by `fixed`. kAuto picks backward
// induction under a sufficient-recall certificate, exhaustive search
// otherwise; asking for kBackward without the certificate is an error.
// Tie-break: the first maximizing action in declaration order, per row.
SolveResult SolveSingleAgent(const CidModel& model, const std::string& agent,
                             SolveMethod method = SolveMethod::kAuto,
                             const PolicyProfile& fixed = {});

// SolveSingleAgent with every other decision held at `profile`.
SolveResult BestResponse(const CidModel& model, const PolicyProfile& profile,
                         const std::string& agent);

// All pure profiles where no agent can improve its own expected utility by
// more than kTolerance. Exhaustive over the joint pure-policy space, in
// deterministic enumeration order; may be empty.
std::vector<SolveResult> PureNashEquilibria(const CidModel& model);

}  // namespace cid

#endif  // CID_SOLVE_HPP_
