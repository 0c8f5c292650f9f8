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

#include "cid/model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

namespace cid {

const char* KindName(NodeKind kind) {
  switch (kind) {
    case NodeKind::kChance: return "chance";
    case NodeKind::kDecision: return "decision";
    case NodeKind::kUtility: return "utility";
  }
  return "?";
}

bool IsValidIdentifier(const std::string& name) {
  if (name.empty()) return false;
  auto head = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
  auto tail = [&](char c) { return head(c) || std::isdigit(static_cast<unsigned char>(c)); };
  if (!head(name[0])) return false;
  for (size_t i = 1; i < name.size(); ++i) {
    if (!tail(name[i])) return false;
  }
  return true;
}

bool DecisionRule::IsPure() const {
  for (const auto& row : rows) {
    for (double p : row) {
      if (p != 0.0 && p != 1.0) return false;
    }
  }
  return true;
}

bool PolicyProfile::IsPure() const {
  for (const auto& [name, rule] : rules) {
    if (!rule.IsPure()) return false;
  }
  return true;
}

int CidModel::IndexOf(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? -1 : it->second;
}

int CidModel::RequireNode(const std::string& name) const {
  int i = IndexOf(name);
  if (i < 0) Fail(ErrorCode::kUsage, "unknown node '" + name + "'");
  return i;
}

void CidModel::RequireAgent(const std::string& agent) const {
  if (std::find(agents_.begin(), agents_.end(), agent) == agents_.end()) {
    Fail(ErrorCode::kUsage, "unknown agent '" + agent + "'");
  }
}

bool CidModel::HasEdge(int from, int to) const {
  const auto& p = nodes_[to].parents;
  return std::find(p.begin(), p.end(), from) != p.end();
}

bool CidModel::IsInformationEdge(int from, int to) const {
  return nodes_[to].kind == NodeKind::kDecision && HasEdge(from, to);
}

namespace {

std::vector<int> Reachable(const std::vector<std::vector<int>>& next, int start) {
  std::vector<char> seen(next.size(), 0);
  std::vector<int> stack = {start};
  while (!stack.empty()) {
    int n = stack.back();
    stack.pop_back();
    for (int m : next[n]) {
      if (!seen[m]) {
        seen[m] = 1;
        stack.push_back(m);
      }
    }
  }
  std::vector<int> out;
  for (size_t i = 0; i < seen.size(); ++i) {
    if (seen[i]) out.push_back(static_cast<int>(i));
  }
  return out;
}

}  // namespace

std::vector<int> CidModel::Ancestors(int i) const {
  std::vector<std::vector<int>> up(nodes_.size());
  for (size_t n = 0; n < nodes_.size(); ++n) up[n] = nodes_[n].parents;
  return Reachable(up, i);
}

std::vector<int> CidModel::Descendants(int i) const { return Reachable(children_, i); }

std::vector<int> CidModel::DecisionsOf(const std::string& agent) const {
  std::vector<int> out;
  for (int i = 0; i < num_nodes(); ++i) {
    if (nodes_[i].kind == NodeKind::kDecision && nodes_[i].agent == agent) out.push_back(i);
  }
  return out;
}

std::vector<int> CidModel::UtilitiesOf(const std::string& agent) const {
  std::vector<int> out;
  for (int i = 0; i < num_nodes(); ++i) {
    if (nodes_[i].kind == NodeKind::kUtility && nodes_[i].agent == agent) out.push_back(i);
  }
  return out;
}

const Cpt* CidModel::cpt(int i) const {
  return cpts_[i].has_value() ? &*cpts_[i] : nullptr;
}

const UtilityTable* CidModel::utility(int i) const {
  return utilities_[i].has_value() ? &*utilities_[i] : nullptr;
}

const std::vector<double>& CidModel::UtilityValues(int i) const { return utility_values_[i]; }

int CidModel::UtilityOutcomeIndex(int i, std::int64_t config) const {
  return utility_outcome_index_[i][config];
}

ConfigIndexer CidModel::ParentIndexer(int i) const {
  std::vector<int> sizes;
  sizes.reserve(nodes_[i].parents.size());
  for (int p : nodes_[i].parents) sizes.push_back(static_cast<int>(nodes_[p].outcomes.size()));
  return ConfigIndexer(std::move(sizes));
}

std::int64_t CidModel::ParentConfigCount(int i) const { return ParentIndexer(i).count(); }

void CidModel::RequireValid() const {
  if (report_.ok) return;
  const ValidationIssue& v = report_.violations.front();
  Fail(ErrorCode::kValidation, "invalid model: " + v.subject + ": " + v.message);
}

// --- Builder ------------------------------------------------------------

namespace {

[[noreturn]] void BuildFail(const std::string& message) {
  Fail(ErrorCode::kParse, message);
}

void CheckDomain(const std::string& node, const std::vector<std::string>& outcomes) {
  if (outcomes.empty()) BuildFail("node '" + node + "': domain must be nonempty");
  std::set<std::string> seen;
  for (const auto& o : outcomes) {
    if (!IsValidIdentifier(o)) {
      BuildFail("node '" + node + "': bad outcome label '" + o + "'");
    }
    if (!seen.insert(o).second) {
      BuildFail("node '" + node + "': duplicate outcome '" + o + "'");
    }
  }
}

}  // namespace

const CidModelBuilder::PendingNode* CidModelBuilder::Find(const std::string& name) const {
  for (const auto& p : pending_) {
    if (p.proto.name == name) return &p;
  }
  return nullptr;
}

CidModelBuilder& CidModelBuilder::AddAgent(const std::string& name) {
  if (!IsValidIdentifier(name)) BuildFail("bad agent name '" + name + "'");
  if (std::find(agents_.begin(), agents_.end(), name) != agents_.end()) {
    BuildFail("duplicate agent '" + name + "'");
  }
  agents_.push_back(name);
  return *this;
}

CidModelBuilder& CidModelBuilder::AddChance(const std::string& name,
                                            std::vector<std::string> outcomes,
                                            std::vector<std::string> parents,
                                            bool world) {
  PendingNode p;
  p.proto.name = name;
  p.proto.kind = NodeKind::kChance;
  p.proto.outcomes = std::move(outcomes);
  p.proto.world = world;
  p.parent_names = std::move(parents);
  pending_.push_back(std::move(p));
  return *this;
}

CidModelBuilder& CidModelBuilder::AddDecision(const std::string& name,
                                              const std::string& agent,
                                              std::vector<std::string> outcomes,
                                              std::vector<std::string> observes) {
  PendingNode p;
  p.proto.name = name;
  p.proto.kind = NodeKind::kDecision;
  p.proto.agent = agent;
  p.proto.outcomes = std::move(outcomes);
  p.parent_names = std::move(observes);
  pending_.push_back(std::move(p));
  return *this;
}

CidModelBuilder& CidModelBuilder::AddUtility(const std::string& name,
                                             const std::string& agent,
                                             std::vector<std::string> parents) {
  PendingNode p;
  p.proto.name = name;
  p.proto.kind = NodeKind::kUtility;
  p.proto.agent = agent;
  p.parent_names = std::move(parents);
  pending_.push_back(std::move(p));
  return *this;
}

CidModelBuilder& CidModelBuilder::SetCpt(const std::string& name,
                                         std::vector<std::vector<double>> rows) {
  cpts_[name] = std::move(rows);
  return *this;
}

CidModelBuilder& CidModelBuilder::SetUtility(const std::string& name,
                                             std::vector<double> values) {
  utilities_[name] = std::move(values);
  return *this;
}

CidModel CidModelBuilder::Build() const {
  CidModel m;
  m.agents_ = agents_;

  for (const auto& p : pending_) {
    const Node& n = p.proto;
    if (!IsValidIdentifier(n.name)) BuildFail("bad node name '" + n.name + "'");
    if (m.index_.count(n.name)) BuildFail("duplicate node '" + n.name + "'");
    if (n.kind != NodeKind::kUtility) CheckDomain(n.name, n.outcomes);
    if (n.kind != NodeKind::kChance &&
        std::find(agents_.begin(), agents_.end(), n.agent) == agents_.end()) {
      BuildFail("node '" + n.name + "': undeclared agent '" + n.agent + "'");
    }
    m.index_[n.name] = static_cast<int>(m.nodes_.size());
    m.nodes_.push_back(n);
  }

  // Resolve parent references (forward references allowed).
  for (size_t i = 0; i < pending_.size(); ++i) {
    const auto& names = pending_[i].parent_names;
    std::set<std::string> seen;
    for (const auto& pname : names) {
      auto it = m.index_.find(pname);
      if (it == m.index_.end()) {
        BuildFail("node '" + m.nodes_[i].name + "': unknown parent '" + pname + "'");
      }
      if (!seen.insert(pname).second) {
        BuildFail("node '" + m.nodes_[i].name + "': duplicate parent '" + pname + "'");
      }
      m.nodes_[i].parents.push_back(it->second);
    }
  }

  // Mechanisms (dimension errors are structural and throw). Utility tables
  // go first and their value domains are derived on the spot: expected row
  // counts everywhere depend on parent domains, and a utility's domain only
  // exists once its table is known. Chains of utility parents resolve by
  // iterating to a fixpoint; whatever stays blocked (utility cycles, absent
  // upstream tables) is left mechanism-free for the validation report.
  m.cpts_.resize(m.nodes_.size());
  m.utilities_.resize(m.nodes_.size());
  m.utility_values_.resize(m.nodes_.size());
  m.utility_outcome_index_.resize(m.nodes_.size());
  auto underived = [&m](int i) {
    for (int p : m.nodes_[i].parents) {
      if (m.nodes_[p].outcomes.empty()) return true;
    }
    return false;
  };
  // Derived utility domain: distinct attained values, ascending.
  auto derive_domain = [&m](int i) {
    const auto& values = m.utilities_[i]->values;
    bool finite = true;
    for (double v : values) finite = finite && std::isfinite(v);
    if (!finite) return;  // becomes a validation violation instead
    std::vector<double> distinct(values);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    std::vector<std::string> labels;
    labels.reserve(distinct.size());
    for (double v : distinct) labels.push_back(FormatNumber(v));
    for (size_t a = 0; a + 1 < labels.size(); ++a) {
      if (labels[a] == labels[a + 1]) {  // distinct doubles, same 12-digit text
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", distinct[a]);
        labels[a] = buf;
        std::snprintf(buf, sizeof(buf), "%.17g", distinct[a + 1]);
        labels[a + 1] = buf;
      }
    }
    m.utility_values_[i] = distinct;
    m.nodes_[i].outcomes = labels;
    auto& outcome_index = m.utility_outcome_index_[i];
    outcome_index.resize(values.size());
    for (size_t r = 0; r < values.size(); ++r) {
      outcome_index[r] = static_cast<int>(
          std::lower_bound(distinct.begin(), distinct.end(), values[r]) - distinct.begin());
    }
  };
  std::vector<int> pending_tables;
  for (const auto& [name, values] : utilities_) {
    auto it = m.index_.find(name);
    if (it == m.index_.end()) BuildFail("table for unknown node '" + name + "'");
    if (m.nodes_[it->second].kind != NodeKind::kUtility) {
      BuildFail("node '" + name + "': only utility nodes carry a table");
    }
    pending_tables.push_back(it->second);
  }
  for (bool progress = true; progress;) {
    progress = false;
    for (auto it = pending_tables.begin(); it != pending_tables.end();) {
      const int i = *it;
      if (underived(i)) {
        ++it;
        continue;
      }
      const std::string& name = m.nodes_[i].name;
      const std::vector<double>& values = utilities_.at(name);
      const std::int64_t want = m.ParentConfigCount(i);
      if (static_cast<std::int64_t>(values.size()) != want) {
        BuildFail("node '" + name + "': table has " + std::to_string(values.size()) +
                  " rows, expected " + std::to_string(want));
      }
      m.utilities_[i] = UtilityTable{values};
      derive_domain(i);
      it = pending_tables.erase(it);
      progress = true;
    }
  }
  for (const auto& [name, rows] : cpts_) {
    auto it = m.index_.find(name);
    if (it == m.index_.end()) BuildFail("cpt for unknown node '" + name + "'");
    const int i = it->second;
    const Node& n = m.nodes_[i];
    if (n.kind != NodeKind::kChance) {
      BuildFail("node '" + name + "': only chance nodes carry a cpt");
    }
    if (underived(i)) continue;
    const std::int64_t want = m.ParentConfigCount(i);
    if (static_cast<std::int64_t>(rows.size()) != want) {
      BuildFail("node '" + name + "': cpt has " + std::to_string(rows.size()) +
                " rows, expected " + std::to_string(want));
    }
    for (const auto& row : rows) {
      if (row.size() != n.outcomes.size()) {
        BuildFail("node '" + name + "': cpt row width " + std::to_string(row.size()) +
                  ", expected " + std::to_string(n.outcomes.size()));
      }
    }
    m.cpts_[i] = Cpt{rows};
  }

  // Children.
  m.children_.assign(m.nodes_.size(), {});
  for (int i = 0; i < m.num_nodes(); ++i) {
    for (int p : m.nodes_[i].parents) m.children_[p].push_back(i);
  }
  for (auto& c : m.children_) std::sort(c.begin(), c.end());

  ValidationReport& report = m.report_;
  auto violation = [&report](const std::string& subject, const std::string& message) {
    report.ok = false;
    report.violations.push_back({subject, message});
  };

  // Acyclicity and the canonical topological order (Kahn, smallest
  // declaration index first).
  {
    std::vector<int> indegree(m.nodes_.size(), 0);
    for (int i = 0; i < m.num_nodes(); ++i) {
      indegree[i] = static_cast<int>(m.nodes_[i].parents.size());
    }
    std::set<int> ready;
    for (int i = 0; i < m.num_nodes(); ++i) {
      if (indegree[i] == 0) ready.insert(i);
    }
    while (!ready.empty()) {
      int n = *ready.begin();
      ready.erase(ready.begin());
      m.topo_.push_back(n);
      for (int c : m.children_[n]) {
        if (--indegree[c] == 0) ready.insert(c);
      }
    }
    if (static_cast<int>(m.topo_.size()) != m.num_nodes()) {
      m.acyclic_ = false;
      // Walk parent links inside the cyclic core to surface one cycle.
      std::vector<char> core(m.nodes_.size(), 0);
      for (int i = 0; i < m.num_nodes(); ++i) core[i] = indegree[i] > 0;
      int start = 0;
      while (!core[start]) ++start;
      std::vector<int> path;
      std::vector<int> position(m.nodes_.size(), -1);
      int cur = start;
      while (position[cur] < 0) {
        position[cur] = static_cast<int>(path.size());
        path.push_back(cur);
        for (int p : m.nodes_[cur].parents) {
          if (core[p]) {
            cur = p;
            break;
          }
        }
      }
      std::ostringstream os;
      os << "cycle: ";
      for (int i = static_cast<int>(path.size()) - 1; i >= position[cur]; --i) {
        os << m.nodes_[path[i]].name << " -> ";
      }
      os << m.nodes_[cur].name;
      violation(m.nodes_[cur].name, os.str());
      m.topo_.clear();
    }
  }

  // Mechanism presence, probability ranges, row sums, finiteness.
  for (int i = 0; i < m.num_nodes(); ++i) {
    const Node& n = m.nodes_[i];
    if (n.kind == NodeKind::kChance) {
      if (!m.cpts_[i].has_value()) {
        violation(n.name, "chance node lacks a cpt");
        continue;
      }
      const auto& rows = m.cpts_[i]->rows;
      for (size_t r = 0; r < rows.size(); ++r) {
        double sum = 0.0;
        bool finite = true;
        for (double p : rows[r]) {
          if (!std::isfinite(p)) finite = false;
          sum += p;
        }
        if (!finite) {
          violation(n.name, "cpt row " + std::to_string(r) + " has a non-finite entry");
          continue;
        }
        for (double p : rows[r]) {
          if (p < 0.0 || p > 1.0) {
            violation(n.name, "cpt row " + std::to_string(r) + " has probability " +
                                  FormatNumber(p) + " outside [0, 1]");
            break;
          }
        }
        if (std::abs(sum - 1.0) > kTolerance) {
          violation(n.name, "cpt row " + std::to_string(r) + " sums to " + FormatNumber(sum));
        }
      }
    } else if (n.kind == NodeKind::kUtility) {
      if (!m.utilities_[i].has_value()) {
        violation(n.name, "utility node lacks a table");
        continue;
      }
      for (size_t r = 0; r < m.utilities_[i]->values.size(); ++r) {
        if (!std::isfinite(m.utilities_[i]->values[r])) {
          violation(n.name, "table row " + std::to_string(r) + " is not finite");
        }
      }
    }
  }

  // Utility nodes may only influence decisions.
  for (int i = 0; i < m.num_nodes(); ++i) {
    if (m.nodes_[i].kind != NodeKind::kUtility) continue;
    for (int c : m.children_[i]) {
      if (m.nodes_[c].kind != NodeKind::kDecision) {
        violation(m.nodes_[i].name + " -> " + m.nodes_[c].name,
                  "utility nodes may only have decision children");
      }
    }
  }

  // Faithfulness notices: a mechanism that never reads one of its parents.
  for (int i = 0; i < m.num_nodes(); ++i) {
    const Node& n = m.nodes_[i];
    if (n.parents.empty()) continue;
    if (n.kind == NodeKind::kDecision) continue;
    if ((n.kind == NodeKind::kChance && !m.cpts_[i].has_value()) ||
        (n.kind == NodeKind::kUtility && !m.utilities_[i].has_value())) {
      continue;
    }
    ConfigIndexer indexer = m.ParentIndexer(i);
    for (size_t pos = 0; pos < n.parents.size(); ++pos) {
      if (indexer.size(static_cast<int>(pos)) < 2) continue;
      bool ignored = true;
      for (std::int64_t c = 0; c < indexer.count() && ignored; ++c) {
        auto digits = indexer.DigitsOf(c);
        if (digits[pos] == 0) continue;
        digits[pos] = 0;
        const std::int64_t base = indexer.IndexOf(digits);
        if (n.kind == NodeKind::kChance) {
          ignored = m.cpts_[i]->rows[c] == m.cpts_[i]->rows[base];
        } else {
          ignored = m.utilities_[i]->values[c] == m.utilities_[i]->values[base];
        }
      }
      if (ignored) {
        report.warnings.push_back(
            {n.name, "mechanism never depends on parent '" + m.nodes_[n.parents[pos]].name + "'"});
      }
    }
  }

  return m;
}

// --- Policies -------------------------------------------------------------

DecisionRule UniformRule(const CidModel& model, int decision) {
  const Node& n = model.node(decision);
  const double p = 1.0 / static_cast<double>(n.outcomes.size());
  DecisionRule rule;
  rule.rows.assign(model.ParentConfigCount(decision),
                   std::vector<double>(n.outcomes.size(), p));
  return rule;
}

PolicyProfile UniformProfile(const CidModel& model) {
  PolicyProfile profile;
  for (int i = 0; i < model.num_nodes(); ++i) {
    if (model.node(i).kind == NodeKind::kDecision) {
      profile.rules[model.node(i).name] = UniformRule(model, i);
    }
  }
  return profile;
}

void RequirePolicyCovers(const CidModel& model, const PolicyProfile& profile,
                         const std::vector<int>& decisions) {
  for (int d : decisions) {
    const Node& n = model.node(d);
    auto it = profile.rules.find(n.name);
    if (it == profile.rules.end()) {
      Fail(ErrorCode::kUsage, "policy missing decision '" + n.name + "'");
    }
    const auto& rows = it->second.rows;
    const std::int64_t want = model.ParentConfigCount(d);
    if (static_cast<std::int64_t>(rows.size()) != want) {
      Fail(ErrorCode::kUsage, "policy for '" + n.name + "' has " +
                                  std::to_string(rows.size()) + " rows, expected " +
                                  std::to_string(want));
    }
    for (size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != n.outcomes.size()) {
        Fail(ErrorCode::kUsage,
             "policy for '" + n.name + "' row " + std::to_string(r) + " has width " +
                 std::to_string(rows[r].size()) + ", expected " +
                 std::to_string(n.outcomes.size()));
      }
      double sum = 0.0;
      for (double p : rows[r]) {
        if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
          Fail(ErrorCode::kUsage, "policy for '" + n.name + "' row " + std::to_string(r) +
                                      " has a probability outside [0, 1]");
        }
        sum += p;
      }
      if (std::abs(sum - 1.0) > kTolerance) {
        Fail(ErrorCode::kUsage, "policy for '" + n.name + "' row " + std::to_string(r) +
                                    " sums to " + FormatNumber(sum));
      }
    }
  }
}

// --- Induced network -------------------------------------------------------

int InducedNetwork::IndexOf(const std::string& name) const {
  auto it = index.find(name);
  return it == index.end() ? -1 : it->second;
}

int InducedNetwork::RequireNode(const std::string& name) const {
  int i = IndexOf(name);
  if (i < 0) Fail(ErrorCode::kUsage, "unknown node '" + name + "'");
  return i;
}

int InducedNetwork::OutcomeIndex(int node, const std::string& label) const {
  const auto& labels = outcomes[node];
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) {
    Fail(ErrorCode::kUsage, "node '" + names[node] + "' has no outcome '" + label + "'");
  }
  return static_cast<int>(it - labels.begin());
}

InducedNetwork InduceNetwork(const CidModel& model, const PolicyProfile& profile) {
  model.RequireValid();
  std::vector<int> decisions;
  for (int i = 0; i < model.num_nodes(); ++i) {
    if (model.node(i).kind == NodeKind::kDecision) decisions.push_back(i);
  }
  RequirePolicyCovers(model, profile, decisions);

  InducedNetwork net;
  net.index = {};
  net.topo = model.TopologicalOrder();
  for (int i = 0; i < model.num_nodes(); ++i) {
    const Node& n = model.node(i);
    net.names.push_back(n.name);
    net.kinds.push_back(n.kind);
    net.agents.push_back(n.agent);
    net.outcomes.push_back(n.outcomes);
    net.parents.push_back(n.parents);
    net.utility_values.push_back(model.UtilityValues(i));
    net.index[n.name] = i;
    switch (n.kind) {
      case NodeKind::kChance:
        net.cpts.push_back(*model.cpt(i));
        break;
      case NodeKind::kDecision:
        net.cpts.push_back(Cpt{profile.rules.at(n.name).rows});
        break;
      case NodeKind::kUtility: {
        Cpt cpt;
        const std::int64_t count = model.ParentConfigCount(i);
        cpt.rows.assign(count, std::vector<double>(n.outcomes.size(), 0.0));
        for (std::int64_t c = 0; c < count; ++c) {
          cpt.rows[c][model.UtilityOutcomeIndex(i, c)] = 1.0;
        }
        net.cpts.push_back(std::move(cpt));
        break;
      }
    }
  }
  return net;
}

// --- Whole-model transforms -------------------------------------------------

namespace {

// Re-runs the builder with per-node hooks; the single validation path.
CidModel Rebuild(const CidModel& model,
                 const std::function<void(int, CidModelBuilder&)>& emit_node) {
  CidModelBuilder b;
  for (const auto& a : model.agents()) b.AddAgent(a);
  for (int i = 0; i < model.num_nodes(); ++i) emit_node(i, b);
  return b.Build();
}

std::vector<std::string> ParentNames(const CidModel& model, int i) {
  std::vector<std::string> names;
  for (int p : model.node(i).parents) names.push_back(model.node(p).name);
  return names;
}

void EmitUnchanged(const CidModel& model, int i, CidModelBuilder& b) {
  const Node& n = model.node(i);
  switch (n.kind) {
    case NodeKind::kChance:
      b.AddChance(n.name, n.outcomes, ParentNames(model, i), n.world);
      if (model.cpt(i)) b.SetCpt(n.name, model.cpt(i)->rows);
      break;
    case NodeKind::kDecision:
      b.AddDecision(n.name, n.agent, n.outcomes, ParentNames(model, i));
      break;
    case NodeKind::kUtility:
      b.AddUtility(n.name, n.agent, ParentNames(model, i));
      if (model.utility(i)) b.SetUtility(n.name, model.utility(i)->values);
      break;
  }
}

}  // namespace

CidModel WithReplacedCpt(const CidModel& model, const std::string& node,
                         std::vector<std::vector<double>> rows) {
  const int target = model.RequireNode(node);
  if (model.node(target).kind != NodeKind::kChance) {
    Fail(ErrorCode::kUsage, "node '" + node + "' is not a chance node");
  }
  return Rebuild(model, [&](int i, CidModelBuilder& b) {
    EmitUnchanged(model, i, b);
    if (i == target) b.SetCpt(node, rows);
  });
}

CidModel WithRemovedInfoEdge(const CidModel& model, const std::string& from,
                             const std::string& decision) {
  const int f = model.RequireNode(from);
  const int d = model.RequireNode(decision);
  if (!model.IsInformationEdge(f, d)) {
    Fail(ErrorCode::kUsage, "'" + from + " -> " + decision + "' is not an information link");
  }
  return Rebuild(model, [&](int i, CidModelBuilder& b) {
    if (i != d) {
      EmitUnchanged(model, i, b);
      return;
    }
    const Node& n = model.node(i);
    std::vector<std::string> observes;
    for (int p : n.parents) {
      if (p != f) observes.push_back(model.node(p).name);
    }
    b.AddDecision(n.name, n.agent, n.outcomes, observes);
  });
}

CidModel WithDecisionAsChance(const CidModel& model, const std::string& decision,
                              const DecisionRule& rule) {
  const int d = model.RequireNode(decision);
  if (model.node(d).kind != NodeKind::kDecision) {
    Fail(ErrorCode::kUsage, "node '" + decision + "' is not a decision node");
  }
  for (int p : model.node(d).parents) {
    if (model.node(p).kind == NodeKind::kUtility) {
      Fail(ErrorCode::kUsage,
           "decision '" + decision + "' observes a utility node; cannot become chance");
    }
  }
  PolicyProfile shim;
  shim.rules[decision] = rule;
  RequirePolicyCovers(model, shim, {d});
  return Rebuild(model, [&](int i, CidModelBuilder& b) {
    if (i != d) {
      EmitUnchanged(model, i, b);
      return;
    }
    const Node& n = model.node(i);
    b.AddChance(n.name, n.outcomes, ParentNames(model, i), false);
    b.SetCpt(n.name, rule.rows);
  });
}

}  // namespace cid
