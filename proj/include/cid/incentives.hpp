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

#ifndef CID_INCENTIVES_HPP_
#define CID_INCENTIVES_HPP_

#include <string>
#include <vector>

#include "cid/model.hpp"
#include "cid/solve.hpp"

namespace cid {

// Structural incentive analysis. All findings are graph-level; the
// decision-theoretic counterparts (VoI, mechanism-perturbation checks) live
// beside them so claims stay cross-checkable.

enum class IncentiveKind {
  kAbility,
  kControlIncentive,
  kRequisiteObservation,
};

const char* IncentiveKindName(IncentiveKind kind);

struct IncentiveFinding {
  std::string decision;
  std::string subject;
  IncentiveKind kind = IncentiveKind::kAbility;
  bool present = false;
  std::vector<std::string> witness;  // inclusive node path; empty when absent
};

// Present iff a directed path decision -> ... -> subject exists. The witness
// is the shortest such path, ties broken by lexicographic comparison of the
// node-name sequence.
IncentiveFinding AbilityToInfluence(const CidModel& model,
                                    const std::string& decision,
                                    const std::string& subject);

// Present iff some directed path decision -> ... -> subject -> ... -> U
// exists with U a utility node of the decision's owner. The witness
// concatenates the two shortest legs (each tie-broken lexicographically);
// in a DAG the legs can only meet at the subject, so the result is simple.
IncentiveFinding ControlIncentive(const CidModel& model,
                                  const std::string& decision,
                                  const std::string& subject);

// `obs` must be an information link of `decision` (else kUsage). Absent iff
// obs is d-separated from the owner's utility descendants of the decision
// given the decision and its other parents; the witness is an unblocked
// trail.
IncentiveFinding RequisiteObservation(const CidModel& model,
                                      const std::string& decision,
                                      const std::string& obs);

// Optimal expected utility minus the optimum after deleting the obs ->
// decision edge. `fixed` pins other agents' decisions, as in SolveSingleAgent.
// Nonnegative up to kTolerance; zero for nonrequisite observations.
double ValueOfInformation(const CidModel& model, const std::string& agent,
                          const std::string& decision, const std::string& obs,
                          const PolicyProfile& fixed = {});

struct DiagnosticFlag {
  std::string subject;
  IncentiveFinding ability;
  IncentiveFinding control;
};

// Every `world`-tagged chance node the decision can both reach and profit
// through, i.e. with Ability and ControlIncentive both present.
struct DiagnosticReport {
  std::string decision;
  std::vector<DiagnosticFlag> flagged;
};

DiagnosticReport SelfFulfillingDiagnostic(const CidModel& model,
                                          const std::string& decision);

}  // namespace cid

#endif  // CID_INCENTIVES_HPP_
