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

#include "cid/solve.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <tuple>

#include "cid/inference.hpp"

namespace cid {

const char* MethodName(SolveMethod method) {
  switch (method) {
    case SolveMethod::kAuto:
      return "auto";
    case SolveMethod::kExhaustive:
      return "exhaustive";
    case SolveMethod::kBackward:
      return "backward";
  }
  return "?";
}

namespace {

std::vector<int> TopoPositions(const CidModel& model) {
  std::vector<int> pos(static_cast<size_t>(model.num_nodes()), 0);
  const std::vector<int>& topo = model.TopologicalOrder();
  for (size_t i = 0; i < topo.size(); ++i) {
    pos[static_cast<size_t>(topo[i])] = static_cast<int>(i);
  }
  return pos;
}

// The agent's decisions sorted by topological position; the only order that
// can certify sufficient recall, since observation edges must point forward.
std::vector<int> DecisionOrder(const CidModel& model,
                               const std::string& agent) {
  std::vector<int> mine = model.DecisionsOf(agent);
  std::vector<int> pos = TopoPositions(model);
  std::stable_sort(mine.begin(), mine.end(),
                   [&](int a, int b) { return pos[a] < pos[b]; });
  return mine;
}

std::map<std::string, double> RecomputeValues(const CidModel& model,
                                              const PolicyProfile& profile) {
  std::map<std::string, double> value;
  for (const std::string& a : model.agents()) {
    value[a] = ExpectedUtility(model, profile, a);
  }
  return value;
}

// --- Joint outcome table ---------------------------------------------------
//
// Exhaustive policy evaluation enumerates every assignment of the non-utility
// nodes once, records its policy-independent weight (chance rows and any
// fixed decision rules), each agent's total utility, and for each free
// decision the (parent row, action) pair it pins. A pure profile's expected
// utility is then a filtered sum over these rows.

struct TableRow {
  double weight = 0.0;
  std::vector<double> util;          // per agent, model order
  std::vector<std::int64_t> rowact;  // per free decision: row * arity + action
};

struct JointTable {
  std::vector<int> free_decisions;  // declaration order
  std::vector<TableRow> rows;
};

JointTable BuildJointTable(const CidModel& model,
                           const std::vector<int>& free_decisions,
                           const PolicyProfile& fixed) {
  JointTable table;
  table.free_decisions = free_decisions;
  std::set<int> free_set(free_decisions.begin(), free_decisions.end());

  std::vector<int> enumerated;  // non-utility nodes, declaration order
  std::vector<int> pos(static_cast<size_t>(model.num_nodes()), -1);
  std::vector<int> sizes;
  for (int i = 0; i < model.num_nodes(); ++i) {
    if (model.node(i).kind == NodeKind::kUtility) continue;
    pos[static_cast<size_t>(i)] = static_cast<int>(enumerated.size());
    enumerated.push_back(i);
    sizes.push_back(static_cast<int>(model.node(i).outcomes.size()));
  }
  ConfigIndexer joint(sizes);
  if (static_cast<std::uint64_t>(joint.count()) > MaxFactorEntries()) {
    Fail(ErrorCode::kResource,
         "joint outcome table needs " + std::to_string(joint.count()) +
             " entries (cap " + std::to_string(MaxFactorEntries()) +
             ", see CID_MAX_FACTOR)");
  }

  const std::vector<std::string>& agents = model.agents();
  std::map<std::string, int> agent_pos;
  for (size_t a = 0; a < agents.size(); ++a) {
    agent_pos[agents[a]] = static_cast<int>(a);
  }

  std::vector<const DecisionRule*> fixed_rule(
      static_cast<size_t>(model.num_nodes()), nullptr);
  for (int i = 0; i < model.num_nodes(); ++i) {
    if (model.node(i).kind != NodeKind::kDecision || free_set.count(i) > 0) {
      continue;
    }
    fixed_rule[static_cast<size_t>(i)] =
        &fixed.rules.at(model.node(i).name);
  }

  std::vector<int> digits(sizes.size(), 0);
  std::vector<int> utility_digit(static_cast<size_t>(model.num_nodes()), 0);
  for (std::int64_t c = 0; c < joint.count(); ++c) {
    if (c > 0) {
      // Odometer increment, last position fastest.
      for (int p = static_cast<int>(digits.size()) - 1; p >= 0; --p) {
        if (++digits[static_cast<size_t>(p)] < sizes[static_cast<size_t>(p)]) {
          break;
        }
        digits[static_cast<size_t>(p)] = 0;
      }
    }
    auto digit_of = [&](int node) {
      return model.node(node).kind == NodeKind::kUtility
                 ? utility_digit[static_cast<size_t>(node)]
                 : digits[static_cast<size_t>(pos[static_cast<size_t>(node)])];
    };
    auto parent_row = [&](int node) {
      const std::vector<int>& ps = model.node(node).parents;
      std::vector<int> pdigits(ps.size());
      for (size_t j = 0; j < ps.size(); ++j) {
        pdigits[j] = digit_of(ps[j]);
      }
      return model.ParentIndexer(node).IndexOf(pdigits);
    };

    // Utility nodes only ever hang off chance/decision parents, so their
    // derived outcomes resolve in one pass regardless of declaration order.
    double weight = 1.0;
    TableRow row;
    row.util.assign(agents.size(), 0.0);
    for (int i = 0; i < model.num_nodes() && weight > 0.0; ++i) {
      const Node& n = model.node(i);
      if (n.kind == NodeKind::kUtility) {
        std::int64_t r = parent_row(i);
        utility_digit[static_cast<size_t>(i)] = model.UtilityOutcomeIndex(i, r);
        row.util[static_cast<size_t>(agent_pos.at(n.agent))] +=
            model.utility(i)->values[static_cast<size_t>(r)];
        continue;
      }
      if (n.kind == NodeKind::kChance) {
        weight *= model.cpt(i)->rows[static_cast<size_t>(parent_row(i))]
                                    [static_cast<size_t>(digit_of(i))];
      }
    }
    if (weight <= 0.0) continue;
    row.rowact.reserve(free_decisions.size());
    bool fixed_zero = false;
    for (int i = 0; i < model.num_nodes(); ++i) {
      const Node& n = model.node(i);
      if (n.kind != NodeKind::kDecision) continue;
      std::int64_t r = parent_row(i);
      int action = digit_of(i);
      if (free_set.count(i) > 0) continue;
      double p = fixed_rule[static_cast<size_t>(i)]
                     ->rows[static_cast<size_t>(r)][static_cast<size_t>(action)];
      if (p <= 0.0) {
        fixed_zero = true;
        break;
      }
      weight *= p;
    }
    if (fixed_zero) continue;
    for (int d : free_decisions) {
      std::int64_t arity =
          static_cast<std::int64_t>(model.node(d).outcomes.size());
      row.rowact.push_back(parent_row(d) * arity + digit_of(d));
    }
    row.weight = weight;
    table.rows.push_back(std::move(row));
  }
  return table;
}

// --- Pure-policy enumeration ------------------------------------------------

struct PolicySpace {
  std::vector<int> decisions;        // declaration order
  std::vector<std::int64_t> rows;    // parent config count per decision
  std::vector<int> arity;            // action count per decision
  std::vector<std::int64_t> offset;  // flattened row offset per decision
  std::int64_t total_rows = 0;       // flattened action slots
  std::uint64_t total_profiles = 1;
};

PolicySpace MakePolicySpace(const CidModel& model,
                            const std::vector<int>& decisions) {
  PolicySpace space;
  space.decisions = decisions;
  const std::uint64_t cap = MaxPolicies();
  for (int d : decisions) {
    std::int64_t rows = model.ParentConfigCount(d);
    int arity = static_cast<int>(model.node(d).outcomes.size());
    space.offset.push_back(space.total_rows);
    space.rows.push_back(rows);
    space.arity.push_back(arity);
    space.total_rows += rows;
    for (std::int64_t r = 0; r < rows; ++r) {
      if (space.total_profiles > cap / static_cast<std::uint64_t>(arity)) {
        Fail(ErrorCode::kResource,
             "pure policy space exceeds the cap of " + std::to_string(cap) +
                 " profiles (see CID_MAX_POLICIES)");
      }
      space.total_profiles *= static_cast<std::uint64_t>(arity);
    }
  }
  return space;
}

// Flattened action assignment, one slot per (decision, parent row).
// Advancing the last slot fastest makes profile 0 the all-first-actions
// profile and orders profiles lexicographically by action vector.
bool AdvanceProfile(const PolicySpace& space, std::vector<int>* act) {
  for (std::int64_t p = space.total_rows - 1; p >= 0; --p) {
    int d = 0;
    while (space.offset[static_cast<size_t>(d)] +
               space.rows[static_cast<size_t>(d)] <=
           p) {
      ++d;
    }
    if (++(*act)[static_cast<size_t>(p)] < space.arity[static_cast<size_t>(d)]) {
      return true;
    }
    (*act)[static_cast<size_t>(p)] = 0;
  }
  return false;
}

double EvaluateProfile(const JointTable& table, const PolicySpace& space,
                       const std::vector<int>& act, int agent_pos) {
  double eu = 0.0;
  for (const TableRow& row : table.rows) {
    bool match = true;
    for (size_t k = 0; k < space.decisions.size(); ++k) {
      std::int64_t arity = space.arity[k];
      std::int64_t r = row.rowact[k] / arity;
      int a = static_cast<int>(row.rowact[k] % arity);
      if (act[static_cast<size_t>(space.offset[k] + r)] != a) {
        match = false;
        break;
      }
    }
    if (match) eu += row.weight * row.util[static_cast<size_t>(agent_pos)];
  }
  return eu;
}

PolicyProfile ProfileFromActions(const CidModel& model,
                                 const PolicySpace& space,
                                 const std::vector<int>& act,
                                 PolicyProfile base) {
  for (size_t k = 0; k < space.decisions.size(); ++k) {
    int d = space.decisions[k];
    DecisionRule rule;
    rule.rows.assign(static_cast<size_t>(space.rows[k]),
                     std::vector<double>(static_cast<size_t>(space.arity[k]),
                                         0.0));
    for (std::int64_t r = 0; r < space.rows[k]; ++r) {
      int a = act[static_cast<size_t>(space.offset[k] + r)];
      rule.rows[static_cast<size_t>(r)][static_cast<size_t>(a)] = 1.0;
    }
    base.rules[model.node(d).name] = std::move(rule);
  }
  return base;
}

int AgentPosition(const CidModel& model, const std::string& agent) {
  const std::vector<std::string>& agents = model.agents();
  return static_cast<int>(std::find(agents.begin(), agents.end(), agent) -
                          agents.begin());
}

SolveResult SolveExhaustive(const CidModel& model, const std::string& agent,
                            const std::vector<int>& mine,
                            const PolicyProfile& fixed) {
  PolicySpace space = MakePolicySpace(model, mine);
  JointTable table = BuildJointTable(model, mine, fixed);
  int agent_pos = AgentPosition(model, agent);

  std::vector<int> act(static_cast<size_t>(space.total_rows), 0);
  std::vector<int> best_act = act;
  double best_eu = -std::numeric_limits<double>::infinity();
  std::int64_t explored = 0;
  do {
    double eu = EvaluateProfile(table, space, act, agent_pos);
    ++explored;
    if (eu > best_eu) {
      best_eu = eu;
      best_act = act;
    }
  } while (AdvanceProfile(space, &act));

  SolveResult result;
  result.method = SolveMethod::kExhaustive;
  result.explored = explored;
  result.profile = ProfileFromActions(model, space, best_act, fixed);
  result.value = RecomputeValues(model, result.profile);
  return result;
}

// --- Backward induction -----------------------------------------------------

SolveResult SolveBackward(const CidModel& model, const std::string& agent,
                          const std::vector<int>& order,
                          const PolicyProfile& fixed) {
  PolicyProfile rules = fixed;
  for (int d : order) {
    rules.rules[model.node(d).name] = UniformRule(model, d);
  }
  std::int64_t explored = 0;
  const std::vector<int> utilities = model.UtilitiesOf(agent);

  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int d = *it;
    const Node& nd = model.node(d);
    const int arity = static_cast<int>(nd.outcomes.size());
    ConfigIndexer row_idx = model.ParentIndexer(d);
    std::vector<std::vector<double>> q(
        static_cast<size_t>(row_idx.count()),
        std::vector<double>(static_cast<size_t>(arity), 0.0));

    InducedNetwork net = InduceNetwork(model, rules);
    for (int u : utilities) {
      std::set<int> target_ids(nd.parents.begin(), nd.parents.end());
      target_ids.insert(d);
      target_ids.insert(u);
      std::vector<std::string> targets;
      for (int t : target_ids) targets.push_back(model.node(t).name);
      Factor f = Marginal(net, targets, {});

      std::vector<int> scope_pos(static_cast<size_t>(model.num_nodes()), -1);
      for (size_t s = 0; s < f.scope.size(); ++s) {
        scope_pos[static_cast<size_t>(f.scope[s])] = static_cast<int>(s);
      }
      std::vector<int> sizes;
      for (int v : f.scope) {
        sizes.push_back(static_cast<int>(net.outcomes[v].size()));
      }
      ConfigIndexer fidx(sizes);
      const std::vector<double>& uvals = model.UtilityValues(u);
      std::vector<int> pdigits(nd.parents.size(), 0);
      for (std::int64_t e = 0; e < fidx.count(); ++e) {
        if (f.values[static_cast<size_t>(e)] == 0.0) continue;
        std::vector<int> digits = fidx.DigitsOf(e);
        for (size_t j = 0; j < nd.parents.size(); ++j) {
          pdigits[j] =
              digits[static_cast<size_t>(scope_pos[static_cast<size_t>(
                  nd.parents[j])])];
        }
        int a = digits[static_cast<size_t>(scope_pos[static_cast<size_t>(d)])];
        int uo = digits[static_cast<size_t>(scope_pos[static_cast<size_t>(u)])];
        q[static_cast<size_t>(row_idx.IndexOf(pdigits))]
         [static_cast<size_t>(a)] +=
            f.values[static_cast<size_t>(e)] * uvals[static_cast<size_t>(uo)];
      }
    }

    DecisionRule solved;
    solved.rows.assign(static_cast<size_t>(row_idx.count()),
                       std::vector<double>(static_cast<size_t>(arity), 0.0));
    for (std::int64_t r = 0; r < row_idx.count(); ++r) {
      int best = 0;
      for (int a = 1; a < arity; ++a) {
        if (q[static_cast<size_t>(r)][static_cast<size_t>(a)] >
            q[static_cast<size_t>(r)][static_cast<size_t>(best)]) {
          best = a;
        }
      }
      solved.rows[static_cast<size_t>(r)][static_cast<size_t>(best)] = 1.0;
    }
    rules.rules[nd.name] = std::move(solved);
    explored += row_idx.count();
  }

  SolveResult result;
  result.method = SolveMethod::kBackward;
  result.explored = explored;
  result.profile = std::move(rules);
  result.value = RecomputeValues(model, result.profile);
  return result;
}

}  // namespace

RecallCertificate CheckSufficientRecall(const CidModel& model,
                                        const std::string& agent) {
  model.RequireValid();
  model.RequireAgent(agent);
  std::vector<int> order = DecisionOrder(model, agent);
  if (order.empty()) {
    Fail(ErrorCode::kUsage, "agent '" + agent + "' has no decisions");
  }
  RecallCertificate cert;
  for (int d : order) cert.order.push_back(model.node(d).name);
  for (size_t i = 0; i < order.size(); ++i) {
    for (size_t j = i + 1; j < order.size(); ++j) {
      const int earlier = order[i];
      const int later = order[j];
      auto require = [&](int observed) {
        if (model.HasEdge(observed, later)) return;
        cert.failures.push_back(
            {model.node(later).name, model.node(observed).name});
      };
      require(earlier);
      for (int p : model.node(earlier).parents) require(p);
    }
  }
  // A later decision can miss the same observation via several earlier
  // decisions; report each gap once.
  std::sort(cert.failures.begin(), cert.failures.end(),
            [](const RecallFailure& a, const RecallFailure& b) {
              return std::tie(a.later, a.missing) < std::tie(b.later, b.missing);
            });
  cert.failures.erase(
      std::unique(cert.failures.begin(), cert.failures.end(),
                  [](const RecallFailure& a, const RecallFailure& b) {
                    return a.later == b.later && a.missing == b.missing;
                  }),
      cert.failures.end());
  cert.ok = cert.failures.empty();
  return cert;
}

SolveResult SolveSingleAgent(const CidModel& model, const std::string& agent,
                             SolveMethod method, const PolicyProfile& fixed) {
  model.RequireValid();
  model.RequireAgent(agent);
  std::vector<int> mine = DecisionOrder(model, agent);
  if (mine.empty()) {
    Fail(ErrorCode::kUsage, "agent '" + agent + "' has no decisions");
  }
  std::vector<int> others;
  for (int i = 0; i < model.num_nodes(); ++i) {
    if (model.node(i).kind == NodeKind::kDecision &&
        model.node(i).agent != agent) {
      others.push_back(i);
    }
  }
  for (const auto& [name, rule] : fixed.rules) {
    int d = model.RequireNode(name);
    if (model.node(d).agent == agent) {
      Fail(ErrorCode::kUsage, "fixed policy constrains decision '" + name +
                                  "' of the solving agent");
    }
  }
  RequirePolicyCovers(model, fixed, others);

  if (method == SolveMethod::kAuto) {
    method = CheckSufficientRecall(model, agent).ok ? SolveMethod::kBackward
                                                    : SolveMethod::kExhaustive;
  } else if (method == SolveMethod::kBackward) {
    RecallCertificate cert = CheckSufficientRecall(model, agent);
    if (!cert.ok) {
      Fail(ErrorCode::kUsage,
           "backward induction needs sufficient recall; '" +
               cert.failures.front().later + "' does not observe '" +
               cert.failures.front().missing + "'");
    }
  }
  if (method == SolveMethod::kBackward) {
    return SolveBackward(model, agent, mine, fixed);
  }
  return SolveExhaustive(model, agent, mine, fixed);
}

SolveResult BestResponse(const CidModel& model, const PolicyProfile& profile,
                         const std::string& agent) {
  model.RequireValid();
  model.RequireAgent(agent);
  PolicyProfile fixed;
  for (const auto& [name, rule] : profile.rules) {
    int d = model.RequireNode(name);
    if (model.node(d).kind == NodeKind::kDecision &&
        model.node(d).agent != agent) {
      fixed.rules[name] = rule;
    }
  }
  return SolveSingleAgent(model, agent, SolveMethod::kAuto, fixed);
}

std::vector<SolveResult> PureNashEquilibria(const CidModel& model) {
  model.RequireValid();
  std::vector<int> decisions;
  for (int i = 0; i < model.num_nodes(); ++i) {
    if (model.node(i).kind == NodeKind::kDecision) decisions.push_back(i);
  }
  const std::vector<std::string>& agents = model.agents();
  if (decisions.empty()) {
    SolveResult vacuous;
    vacuous.method = SolveMethod::kExhaustive;
    vacuous.explored = 1;
    vacuous.value = RecomputeValues(model, vacuous.profile);
    return {vacuous};
  }

  PolicySpace space = MakePolicySpace(model, decisions);
  JointTable table = BuildJointTable(model, decisions, {});
  const std::int64_t total = static_cast<std::int64_t>(space.total_profiles);
  const int num_agents = static_cast<int>(agents.size());

  // Slot ranges per agent: which flattened action slots it controls.
  std::vector<std::vector<std::int64_t>> agent_slots(
      static_cast<size_t>(num_agents));
  for (size_t k = 0; k < decisions.size(); ++k) {
    int a = AgentPosition(model, model.node(decisions[k]).agent);
    for (std::int64_t r = 0; r < space.rows[k]; ++r) {
      agent_slots[static_cast<size_t>(a)].push_back(space.offset[k] + r);
    }
  }

  // eu[p * num_agents + a]; best response values keyed by the profile with
  // the agent's own slots zeroed, in a map to stay sparse.
  std::vector<double> eu(static_cast<size_t>(total) *
                         static_cast<size_t>(num_agents));
  std::vector<std::map<std::int64_t, double>> best(
      static_cast<size_t>(num_agents));
  std::vector<int> slot_arity(static_cast<size_t>(space.total_rows));
  for (size_t k = 0; k < decisions.size(); ++k) {
    for (std::int64_t r = 0; r < space.rows[k]; ++r) {
      slot_arity[static_cast<size_t>(space.offset[k] + r)] = space.arity[k];
    }
  }
  std::vector<std::int64_t> strides(static_cast<size_t>(space.total_rows));
  std::int64_t stride = 1;
  for (std::int64_t p = space.total_rows - 1; p >= 0; --p) {
    strides[static_cast<size_t>(p)] = stride;
    stride *= slot_arity[static_cast<size_t>(p)];
  }

  std::vector<int> act(static_cast<size_t>(space.total_rows), 0);
  std::int64_t index = 0;
  do {
    for (int a = 0; a < num_agents; ++a) {
      double v = EvaluateProfile(table, space, act, a);
      eu[static_cast<size_t>(index * num_agents + a)] = v;
      std::int64_t others_key = index;
      for (std::int64_t slot : agent_slots[static_cast<size_t>(a)]) {
        others_key -= act[static_cast<size_t>(slot)] *
                      strides[static_cast<size_t>(slot)];
      }
      auto [it, inserted] =
          best[static_cast<size_t>(a)].emplace(others_key, v);
      if (!inserted && v > it->second) it->second = v;
    }
    ++index;
  } while (AdvanceProfile(space, &act));

  std::vector<SolveResult> equilibria;
  act.assign(static_cast<size_t>(space.total_rows), 0);
  index = 0;
  do {
    bool stable = true;
    for (int a = 0; a < num_agents && stable; ++a) {
      std::int64_t others_key = index;
      for (std::int64_t slot : agent_slots[static_cast<size_t>(a)]) {
        others_key -= act[static_cast<size_t>(slot)] *
                      strides[static_cast<size_t>(slot)];
      }
      double mine = eu[static_cast<size_t>(index * num_agents + a)];
      double opt = best[static_cast<size_t>(a)].at(others_key);
      if (mine < opt - kTolerance) stable = false;
    }
    if (stable) {
      SolveResult r;
      r.method = SolveMethod::kExhaustive;
      r.explored = total;
      r.profile = ProfileFromActions(model, space, act, {});
      r.value = RecomputeValues(model, r.profile);
      equilibria.push_back(std::move(r));
    }
    ++index;
  } while (AdvanceProfile(space, &act));

  return equilibria;
}

}  // namespace cid
