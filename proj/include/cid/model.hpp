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

#ifndef CID_MODEL_HPP_
#define CID_MODEL_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cid/common.hpp"

namespace cid {

enum class NodeKind { kChance, kDecision, kUtility };

const char* KindName(NodeKind kind);

// Identifiers: [A-Za-z_][A-Za-z0-9_]*
bool IsValidIdentifier(const std::string& name);

// A node in declaration order. `parents` holds node indices in canonical
// (declaration) order; edges into decision nodes are information links.
// For utility nodes `outcomes` is derived from the table: the distinct
// attained values in ascending order, rendered with FormatNumber.
struct Node {
  std::string name;
  NodeKind kind = NodeKind::kChance;
  std::string agent;                  // empty for chance nodes
  std::vector<std::string> outcomes;  // domain labels
  std::vector<int> parents;
  bool world = false;                 // world-state tag (chance nodes only)
};

// Conditional probability table for a chance node: rows[config][outcome],
// where config indexes parent configurations in canonical row order
// (declaration-ordered parents, last parent fastest).
struct Cpt {
  std::vector<std::vector<double>> rows;
};

// Utility mechanism: one real value per parent configuration.
struct UtilityTable {
  std::vector<double> values;
};

struct ValidationIssue {
  std::string subject;  // node name or "from -> to" for edges
  std::string message;
};

struct ValidationReport {
  bool ok = true;
  std::vector<ValidationIssue> violations;
  std::vector<ValidationIssue> warnings;  // faithfulness notices, never fatal
};

// One decision's behavior: rows over parent configurations (canonical row
// order), each a distribution over the decision's actions.
struct DecisionRule {
  std::vector<std::vector<double>> rows;

  bool IsPure() const;
};

// Policies for some set of decision nodes, keyed by node name.
struct PolicyProfile {
  std::map<std::string, DecisionRule> rules;

  bool IsPure() const;
};

class CidModel {
 public:
  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(int i) const { return nodes_[i]; }
  const std::vector<std::string>& agents() const { return agents_; }

  // -1 when the name is unknown.
  int IndexOf(const std::string& name) const;
  // Throws kUsage when the name is unknown.
  int RequireNode(const std::string& name) const;
  void RequireAgent(const std::string& agent) const;

  const std::vector<int>& Children(int i) const { return children_[i]; }
  bool HasEdge(int from, int to) const;
  bool IsInformationEdge(int from, int to) const;
  bool IsAcyclic() const { return acyclic_; }
  // Valid only when the graph is acyclic.
  const std::vector<int>& TopologicalOrder() const { return topo_; }
  std::vector<int> Ancestors(int i) const;    // proper, ascending indices
  std::vector<int> Descendants(int i) const;  // proper, ascending indices

  std::vector<int> DecisionsOf(const std::string& agent) const;
  std::vector<int> UtilitiesOf(const std::string& agent) const;

  // Mechanism access; null when the node has no mechanism of that shape.
  const Cpt* cpt(int i) const;
  const UtilityTable* utility(int i) const;
  // Distinct attained values, ascending; empty for non-utility nodes.
  const std::vector<double>& UtilityValues(int i) const;
  // Outcome index (into the derived domain) attained at a parent config.
  int UtilityOutcomeIndex(int i, std::int64_t config) const;

  ConfigIndexer ParentIndexer(int i) const;
  std::int64_t ParentConfigCount(int i) const;

  const ValidationReport& Validation() const { return report_; }
  // Throws kValidation with the first violation when the model is invalid.
  void RequireValid() const;

 private:
  friend class CidModelBuilder;

  std::vector<Node> nodes_;
  std::vector<std::string> agents_;
  std::map<std::string, int> index_;
  std::vector<std::vector<int>> children_;
  std::vector<std::optional<Cpt>> cpts_;
  std::vector<std::optional<UtilityTable>> utilities_;
  std::vector<std::vector<double>> utility_values_;
  std::vector<std::vector<int>> utility_outcome_index_;
  bool acyclic_ = true;
  std::vector<int> topo_;
  ValidationReport report_;
};

// Incremental construction. Parent references may be forward; names resolve
// at Build(). Structural impossibilities (duplicate names, unknown
// references, malformed tables) throw kParse; semantic issues that still
// admit a well-formed structure (cycles, bad row sums, missing mechanisms,
// utility-children violations) are recorded in the validation report.
class CidModelBuilder {
 public:
  CidModelBuilder& AddAgent(const std::string& name);
  CidModelBuilder& AddChance(const std::string& name,
                             std::vector<std::string> outcomes,
                             std::vector<std::string> parents,
                             bool world = false);
  CidModelBuilder& AddDecision(const std::string& name,
                               const std::string& agent,
                               std::vector<std::string> outcomes,
                               std::vector<std::string> observes);
  CidModelBuilder& AddUtility(const std::string& name,
                              const std::string& agent,
                              std::vector<std::string> parents);
  // Rows in canonical order; row count and widths must match exactly.
  CidModelBuilder& SetCpt(const std::string& name,
                          std::vector<std::vector<double>> rows);
  CidModelBuilder& SetUtility(const std::string& name,
                              std::vector<double> values);

  CidModel Build() const;

 private:
  struct PendingNode {
    Node proto;  // parents unresolved
    std::vector<std::string> parent_names;
  };

  const PendingNode* Find(const std::string& name) const;

  std::vector<std::string> agents_;
  std::vector<PendingNode> pending_;
  std::map<std::string, std::vector<std::vector<double>>> cpts_;
  std::map<std::string, std::vector<double>> utilities_;
};

// --- Policies ---------------------------------------------------------

// Uniform behavior for every decision node.
PolicyProfile UniformProfile(const CidModel& model);
// Uniform behavior for one decision.
DecisionRule UniformRule(const CidModel& model, int decision);
// Throws kUsage unless `profile` supplies a well-formed rule (coverage,
// row sums, ranges) for every decision in `decisions`.
void RequirePolicyCovers(const CidModel& model, const PolicyProfile& profile,
                         const std::vector<int>& decisions);

// --- Induced network --------------------------------------------------

// The Bayesian network induced by fixing a full policy profile: decision
// nodes take their rules as CPTs and utility nodes become deterministic
// chance nodes over their derived value domains. Node indices, names,
// domains and parent sets coincide with the source model.
struct InducedNetwork {
  std::vector<std::string> names;
  std::vector<NodeKind> kinds;
  std::vector<std::string> agents;
  std::vector<std::vector<std::string>> outcomes;
  std::vector<std::vector<int>> parents;
  std::vector<Cpt> cpts;
  std::vector<std::vector<double>> utility_values;  // empty for non-utility
  std::map<std::string, int> index;
  std::vector<int> topo;

  int num_nodes() const { return static_cast<int>(names.size()); }
  int IndexOf(const std::string& name) const;
  int RequireNode(const std::string& name) const;
  int OutcomeIndex(int node, const std::string& label) const;  // kUsage
};

InducedNetwork InduceNetwork(const CidModel& model,
                             const PolicyProfile& profile);

// --- Whole-model transforms -------------------------------------------

// Same graph, one chance node's rows replaced.
CidModel WithReplacedCpt(const CidModel& model, const std::string& node,
                         std::vector<std::vector<double>> rows);
// Removes one information link (edge into a decision). kUsage otherwise.
CidModel WithRemovedInfoEdge(const CidModel& model, const std::string& from,
                             const std::string& decision);
// Rebuilds the model with one decision node turned into a chance node
// governed by the given rule.
CidModel WithDecisionAsChance(const CidModel& model, const std::string& decision,
                              const DecisionRule& rule);

}  // namespace cid

#endif  // CID_MODEL_HPP_
