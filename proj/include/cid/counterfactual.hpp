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

#ifndef CID_COUNTERFACTUAL_HPP_
#define CID_COUNTERFACTUAL_HPP_

#include <map>
#include <string>
#include <vector>

#include "cid/inference.hpp"
#include "cid/model.hpp"

namespace cid {

// Counterfactual copies are named `<name>_cf`. Base models fed to
// Functionalize must not already use the suffix.
inline constexpr char kTwinSuffix[] = "_cf";

bool IsTwinName(const std::string& name);

// Structural-causal form: every chance node of `base` is deterministic given
// its original parents plus a fresh exogenous root (the response-function
// noise node), named `U_<name>` and prepended to the parent list.
struct ScmModel {
  CidModel base;
  std::map<std::string, std::string> noise_of;  // original chance -> noise

  bool IsNoise(const std::string& name) const;
};

// Forced outcomes and mechanism replacements. Decisions become chance nodes
// when intervened (dropping any utility observations, since only decisions
// may observe utilities); parent edges are kept, with the new mechanism
// constant across parent configurations for forced outcomes. Utility nodes
// cannot be intervened.
struct InterventionSpec {
  std::map<std::string, std::string> force;
  std::map<std::string, std::vector<std::vector<double>>> replace;
};

// Response-function construction. Noise outcomes are labeled `f<k>` by the
// enumeration index of the response function (one outcome per parent
// configuration, last configuration fastest); zero-probability functions are
// pruned. Errors: kResource when |dom|^(#parent configs) exceeds 10^4,
// kUsage on reserved names or name collisions.
ScmModel Functionalize(const CidModel& model);

// Single-world do() on any model: replaces the targets' mechanisms in place.
CidModel ApplyInterventions(const CidModel& model, const InterventionSpec& spec);

// Twin network over an ScmModel: the base nodes stay as-is (factual copies)
// and every non-noise node gains a `_cf` copy whose non-noise parents are
// the corresponding copies; noise parents are shared. `spec` targets must
// name counterfactual copies. Un-intervened decision copies remain
// decisions; utility copies keep their owners and tables.
CidModel TwinNetwork(const ScmModel& scm, const InterventionSpec& spec);

// P(targets | evidence, do(spec)) on the twin network. Evidence conventionally
// ranges over factual names and targets over `_cf` copies. `profile` supplies
// one rule per base decision; each surviving decision copy reuses its
// factual rule.
Factor CounterfactualQuery(const ScmModel& scm, const InterventionSpec& spec,
                           const Evidence& evidence,
                           const std::vector<std::string>& targets,
                           const PolicyProfile& profile);

}  // namespace cid

#endif  // CID_COUNTERFACTUAL_HPP_
