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

#include "cid/incentives.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cid/common.hpp"
#include "cid/inference.hpp"

namespace cid {
namespace {

// Hop counts from `source` along directed edges; -1 where unreachable.
std::vector<int> DistancesFrom(const CidModel& model, int source) {
  std::vector<int> dist(static_cast<size_t>(model.num_nodes()), -1);
  dist[source] = 0;
  std::vector<int> frontier{source};
  while (!frontier.empty()) {
    std::vector<int> next;
    for (int v : frontier) {
      for (int c : model.Children(v)) {
        if (dist[c] < 0) {
          dist[c] = dist[v] + 1;
          next.push_back(c);
        }
      }
    }
    frontier = std::move(next);
  }
  return dist;
}

std::vector<int> DistancesTo(const CidModel& model, int target) {
  std::vector<int> dist(static_cast<size_t>(model.num_nodes()), -1);
  dist[target] = 0;
  std::vector<int> frontier{target};
  while (!frontier.empty()) {
    std::vector<int> next;
    for (int v : frontier) {
      for (int p : model.node(v).parents) {
        if (dist[p] < 0) {
          dist[p] = dist[v] + 1;
          next.push_back(p);
        }
      }
    }
    frontier = std::move(next);
  }
  return dist;
}

// The lexicographically least name sequence among shortest directed paths
// from `from` to `to`. Greedy choice per hop is sound: the least sequence
// must take the least feasible step first, and feasibility (staying on some
// shortest path) depends only on the node reached.
std::optional<std::vector<std::string>> LexShortestPath(const CidModel& model,
                                                        int from, int to) {
  std::vector<int> dfrom = DistancesFrom(model, from);
  std::vector<int> dto = DistancesTo(model, to);
  if (dfrom[to] < 0) return std::nullopt;
  int length = dfrom[to];
  std::vector<std::string> path{model.node(from).name};
  int cur = from;
  for (int step = 1; step <= length; ++step) {
    int pick = -1;
    for (int c : model.Children(cur)) {
      if (dfrom[c] != step || dto[c] != length - step) continue;
      if (pick < 0 || model.node(c).name < model.node(pick).name) pick = c;
    }
    cur = pick;
    path.push_back(model.node(cur).name);
  }
  return path;
}

int RequireDecision(const CidModel& model, const std::string& decision) {
  int d = model.RequireNode(decision);
  if (model.node(d).kind != NodeKind::kDecision) {
    Fail(ErrorCode::kUsage, "node '" + decision + "' is not a decision");
  }
  return d;
}

std::vector<int> OwnerUtilities(const CidModel& model, int decision) {
  return model.UtilitiesOf(model.node(decision).agent);
}

}  // namespace

const char* IncentiveKindName(IncentiveKind kind) {
  switch (kind) {
    case IncentiveKind::kAbility:
      return "Ability";
    case IncentiveKind::kControlIncentive:
      return "ControlIncentive";
    case IncentiveKind::kRequisiteObservation:
      return "RequisiteObservation";
  }
  return "?";
}

IncentiveFinding AbilityToInfluence(const CidModel& model,
                                    const std::string& decision,
                                    const std::string& subject) {
  int d = RequireDecision(model, decision);
  int s = model.RequireNode(subject);
  IncentiveFinding finding;
  finding.decision = decision;
  finding.subject = subject;
  finding.kind = IncentiveKind::kAbility;
  if (s == d) return finding;  // paths here have length >= 1
  if (auto path = LexShortestPath(model, d, s)) {
    finding.present = true;
    finding.witness = std::move(*path);
  }
  return finding;
}

IncentiveFinding ControlIncentive(const CidModel& model,
                                  const std::string& decision,
                                  const std::string& subject) {
  IncentiveFinding finding = AbilityToInfluence(model, decision, subject);
  finding.kind = IncentiveKind::kControlIncentive;
  if (!finding.present) return finding;

  int d = RequireDecision(model, decision);
  int s = model.RequireNode(subject);
  std::optional<std::vector<std::string>> onward;
  for (int u : OwnerUtilities(model, d)) {
    auto leg = u == s ? std::optional<std::vector<std::string>>(
                            std::vector<std::string>{model.node(s).name})
                      : LexShortestPath(model, s, u);
    if (!leg) continue;
    if (!onward || leg->size() < onward->size() ||
        (leg->size() == onward->size() && *leg < *onward)) {
      onward = std::move(leg);
    }
  }
  if (!onward) {
    finding.present = false;
    finding.witness.clear();
    return finding;
  }
  finding.witness.insert(finding.witness.end(), onward->begin() + 1,
                         onward->end());
  return finding;
}

IncentiveFinding RequisiteObservation(const CidModel& model,
                                      const std::string& decision,
                                      const std::string& obs) {
  int d = RequireDecision(model, decision);
  int o = model.RequireNode(obs);
  if (!model.HasEdge(o, d)) {
    Fail(ErrorCode::kUsage, "'" + obs + "' is not an information link of '" +
                                decision + "'");
  }
  IncentiveFinding finding;
  finding.decision = decision;
  finding.subject = obs;
  finding.kind = IncentiveKind::kRequisiteObservation;

  std::vector<int> desc = model.Descendants(d);
  std::set<int> below(desc.begin(), desc.end());
  std::vector<std::string> ys;
  for (int u : OwnerUtilities(model, d)) {
    if (below.count(u)) ys.push_back(model.node(u).name);
  }
  if (ys.empty()) return finding;

  std::vector<std::string> zs{decision};
  for (int p : model.node(d).parents) {
    if (p != o) zs.push_back(model.node(p).name);
  }
  if (auto trail = FindActivePath(model, {obs}, ys, zs)) {
    finding.present = true;
    finding.witness = std::move(*trail);
  }
  return finding;
}

double ValueOfInformation(const CidModel& model, const std::string& agent,
                          const std::string& decision, const std::string& obs,
                          const PolicyProfile& fixed) {
  int d = RequireDecision(model, decision);
  if (model.node(d).agent != agent) {
    Fail(ErrorCode::kUsage,
         "decision '" + decision + "' is not owned by agent '" + agent + "'");
  }
  CidModel without = WithRemovedInfoEdge(model, obs, decision);
  double with_obs =
      SolveSingleAgent(model, agent, SolveMethod::kAuto, fixed).value.at(agent);
  double without_obs =
      SolveSingleAgent(without, agent, SolveMethod::kAuto, fixed)
          .value.at(agent);
  return with_obs - without_obs;
}

DiagnosticReport SelfFulfillingDiagnostic(const CidModel& model,
                                          const std::string& decision) {
  RequireDecision(model, decision);
  DiagnosticReport report;
  report.decision = decision;
  for (int i = 0; i < model.num_nodes(); ++i) {
    const Node& node = model.node(i);
    if (node.kind != NodeKind::kChance || !node.world) continue;
    IncentiveFinding ability = AbilityToInfluence(model, decision, node.name);
    if (!ability.present) continue;
    IncentiveFinding control = ControlIncentive(model, decision, node.name);
    if (!control.present) continue;
    report.flagged.push_back({node.name, std::move(ability), std::move(control)});
  }
  return report;
}

}  // namespace cid
