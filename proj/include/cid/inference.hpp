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

#ifndef CID_INFERENCE_HPP_
#define CID_INFERENCE_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cid/model.hpp"

namespace cid {

// A table over a set of network variables. `scope` holds node indices in
// strictly ascending order; `values` is laid out by ConfigIndexer over the
// scope domains (last scope position fastest).
struct Factor {
  std::vector<int> scope;
  std::vector<double> values;
};

// Node name -> outcome label.
using Evidence = std::map<std::string, std::string>;

// Exact posterior marginal P(targets | evidence) by variable elimination
// with a min-degree ordering (ties broken by declaration order).
// Errors: kUsage on an empty target list, unknown names, duplicate targets,
// or targets that are also evidence; kEvidence when the evidence has
// probability zero; kResource when an intermediate factor would exceed the
// cap.
Factor Marginal(const InducedNetwork& net, const std::vector<std::string>& targets,
                const Evidence& evidence);

// Probability of one full joint assignment (every node assigned).
double JointProbability(const InducedNetwork& net,
                        const std::map<std::string, std::string>& assignment);

// Expected total utility for `agent`: the sum of expected values of its
// utility nodes under the induced network.
double ExpectedUtility(const CidModel& model, const PolicyProfile& profile,
                       const std::string& agent);

// Graphical d-separation of X and Y given Z over the full edge set
// (information links included). Sets must be nonempty (X, Y) and pairwise
// disjoint.
bool DSeparated(const CidModel& model, const std::vector<std::string>& xs,
                const std::vector<std::string>& ys, const std::vector<std::string>& zs);

// A d-connecting trail witnessing non-separation, as a node sequence from
// some x to some y; nullopt when separated.
std::optional<std::vector<std::string>> FindActivePath(const CidModel& model,
                                                       const std::vector<std::string>& xs,
                                                       const std::vector<std::string>& ys,
                                                       const std::vector<std::string>& zs);

// True when every directed path from `from` to `to` passes through `via`.
// Vacuously true when no directed path exists.
bool Mediates(const CidModel& model, const std::string& from, const std::string& to,
              const std::vector<std::string>& via);

// First directed path from `from` to `to` (BFS, smallest declaration index
// first), as node names; nullopt when unreachable.
std::optional<std::vector<std::string>> FindDirectedPath(const CidModel& model, int from, int to);

}  // namespace cid

#endif  // CID_INFERENCE_HPP_
