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

#include "cid/counterfactual.hpp"

#include <cstdint>
#include <string>
#include <vector>

#include "cid/common.hpp"

namespace cid {
namespace {

constexpr std::int64_t kMaxResponseFunctions = 10000;

std::string StripTwinSuffix(const std::string& name) {
  return name.substr(0, name.size() - (sizeof(kTwinSuffix) - 1));
}

std::vector<std::string> ParentNames(const CidModel& model, int node) {
  std::vector<std::string> names;
  for (int p : model.node(node).parents) names.push_back(model.node(p).name);
  return names;
}

std::vector<std::vector<double>> ConstantRows(std::int64_t configs, int arity,
                                              int forced) {
  std::vector<std::vector<double>> rows(
      static_cast<std::size_t>(configs), std::vector<double>(arity, 0.0));
  for (auto& row : rows) row[forced] = 1.0;
  return rows;
}

std::int64_t ConfigCountOf(const CidModel& model,
                           const std::vector<int>& parents) {
  std::int64_t count = 1;
  for (int p : parents) {
    count *= static_cast<std::int64_t>(model.node(p).outcomes.size());
  }
  return count;
}

// Shared validation for force/replace targets. Returns the node index.
int CheckTarget(const CidModel& model, const std::string& name,
                const InterventionSpec& spec) {
  int idx = model.IndexOf(name);
  if (idx < 0) Fail(ErrorCode::kUsage, "unknown intervention target '" + name + "'");
  const Node& node = model.node(idx);
  if (node.kind == NodeKind::kUtility) {
    Fail(ErrorCode::kUsage,
         "utility node '" + name + "' cannot be intervened");
  }
  if (spec.force.count(name) && spec.replace.count(name)) {
    Fail(ErrorCode::kUsage,
         "node '" + name + "' has both a forced outcome and a replacement");
  }
  return idx;
}

// Parents an intervened node keeps: everything except utility parents, which
// only decisions may observe and which a chance node must therefore drop.
std::vector<int> KeptParents(const CidModel& model, const Node& node) {
  std::vector<int> kept;
  for (int p : node.parents) {
    if (model.node(p).kind != NodeKind::kUtility) kept.push_back(p);
  }
  return kept;
}

std::vector<std::vector<double>> InterventionRows(
    const CidModel& model, const Node& node, const std::vector<int>& parents,
    const InterventionSpec& spec) {
  std::int64_t configs = ConfigCountOf(model, parents);
  int arity = static_cast<int>(node.outcomes.size());
  auto forced = spec.force.find(node.name);
  if (forced != spec.force.end()) {
    int pos = -1;
    for (int i = 0; i < arity; ++i) {
      if (node.outcomes[i] == forced->second) pos = i;
    }
    if (pos < 0) {
      Fail(ErrorCode::kUsage, "node '" + node.name + "' has no outcome '" +
                                  forced->second + "'");
    }
    return ConstantRows(configs, arity, pos);
  }
  const auto& rows = spec.replace.at(node.name);
  if (static_cast<std::int64_t>(rows.size()) != configs) {
    Fail(ErrorCode::kUsage,
         "replacement for '" + node.name + "' has " +
             std::to_string(rows.size()) + " rows, expected " +
             std::to_string(configs));
  }
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != arity) {
      Fail(ErrorCode::kUsage, "replacement row for '" + node.name +
                                  "' has width " + std::to_string(row.size()) +
                                  ", expected " + std::to_string(arity));
    }
  }
  return rows;
}

}  // namespace

bool IsTwinName(const std::string& name) {
  const std::string suffix = kTwinSuffix;
  return name.size() > suffix.size() &&
         name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0;
}

bool ScmModel::IsNoise(const std::string& name) const {
  for (const auto& [chance, noise] : noise_of) {
    if (noise == name) return true;
  }
  return false;
}

ScmModel Functionalize(const CidModel& model) {
  model.RequireValid();
  for (int i = 0; i < model.num_nodes(); ++i) {
    const std::string& name = model.node(i).name;
    if (IsTwinName(name)) {
      Fail(ErrorCode::kUsage, "node '" + name +
                                  "' uses the reserved counterfactual suffix '" +
                                  kTwinSuffix + "'");
    }
  }

  CidModelBuilder builder;
  for (const std::string& agent : model.agents()) builder.AddAgent(agent);
  std::map<std::string, std::string> noise_of;

  for (int i = 0; i < model.num_nodes(); ++i) {
    const Node& node = model.node(i);
    std::vector<std::string> parents = ParentNames(model, i);
    switch (node.kind) {
      case NodeKind::kDecision:
        builder.AddDecision(node.name, node.agent, node.outcomes, parents);
        break;
      case NodeKind::kUtility:
        builder.AddUtility(node.name, node.agent, parents);
        builder.SetUtility(node.name, model.utility(i)->values);
        break;
      case NodeKind::kChance: {
        int arity = static_cast<int>(node.outcomes.size());
        std::int64_t configs = model.ParentConfigCount(i);
        std::int64_t count = 1;
        for (std::int64_t c = 0; c < configs; ++c) {
          count *= arity;
          if (count > kMaxResponseFunctions) {
            Fail(ErrorCode::kResource,
                 "node '" + node.name + "' needs more than " +
                     std::to_string(kMaxResponseFunctions) +
                     " response functions");
          }
        }
        std::string noise = "U_" + node.name;
        if (model.IndexOf(noise) >= 0 || noise_of.count(node.name)) {
          Fail(ErrorCode::kUsage,
               "noise name '" + noise + "' collides with an existing node");
        }

        // One response function per joint choice of outcome for each parent
        // configuration; function t picks digit c of t (last configuration
        // fastest) under configuration c.
        ConfigIndexer fn(std::vector<int>(static_cast<std::size_t>(configs),
                                          arity));
        const Cpt& cpt = *model.cpt(i);
        std::vector<std::string> labels;
        std::vector<double> probs;
        std::vector<std::int64_t> kept;
        double total = 0.0;
        for (std::int64_t t = 0; t < fn.count(); ++t) {
          double p = 1.0;
          for (std::int64_t c = 0; c < configs; ++c) {
            p *= cpt.rows[static_cast<std::size_t>(c)]
                         [static_cast<std::size_t>(fn.DigitAt(t, c))];
          }
          if (p <= 0.0) continue;
          labels.push_back("f" + std::to_string(t));
          probs.push_back(p);
          kept.push_back(t);
          total += p;
        }
        for (double& p : probs) p /= total;
        builder.AddChance(noise, labels, {});
        builder.SetCpt(noise, {probs});
        noise_of[node.name] = noise;

        std::vector<std::string> new_parents;
        new_parents.push_back(noise);
        new_parents.insert(new_parents.end(), parents.begin(), parents.end());
        std::vector<std::vector<double>> rows;
        rows.reserve(kept.size() * static_cast<std::size_t>(configs));
        for (std::int64_t t : kept) {
          for (std::int64_t c = 0; c < configs; ++c) {
            std::vector<double> row(arity, 0.0);
            row[fn.DigitAt(t, c)] = 1.0;
            rows.push_back(std::move(row));
          }
        }
        builder.AddChance(node.name, node.outcomes, new_parents, node.world);
        builder.SetCpt(node.name, std::move(rows));
        break;
      }
    }
  }

  ScmModel scm;
  scm.base = builder.Build();
  scm.base.RequireValid();
  scm.noise_of = std::move(noise_of);
  return scm;
}

CidModel ApplyInterventions(const CidModel& model,
                            const InterventionSpec& spec) {
  model.RequireValid();
  for (const auto& [name, outcome] : spec.force) CheckTarget(model, name, spec);
  for (const auto& [name, rows] : spec.replace) CheckTarget(model, name, spec);

  CidModelBuilder builder;
  for (const std::string& agent : model.agents()) builder.AddAgent(agent);
  for (int i = 0; i < model.num_nodes(); ++i) {
    const Node& node = model.node(i);
    bool hit = spec.force.count(node.name) || spec.replace.count(node.name);
    if (!hit) {
      std::vector<std::string> parents = ParentNames(model, i);
      switch (node.kind) {
        case NodeKind::kChance:
          builder.AddChance(node.name, node.outcomes, parents, node.world);
          builder.SetCpt(node.name, model.cpt(i)->rows);
          break;
        case NodeKind::kDecision:
          builder.AddDecision(node.name, node.agent, node.outcomes, parents);
          break;
        case NodeKind::kUtility:
          builder.AddUtility(node.name, node.agent, parents);
          builder.SetUtility(node.name, model.utility(i)->values);
          break;
      }
      continue;
    }
    std::vector<int> kept = node.kind == NodeKind::kDecision
                                ? KeptParents(model, node)
                                : node.parents;
    std::vector<std::string> parents;
    for (int p : kept) parents.push_back(model.node(p).name);
    builder.AddChance(node.name, node.outcomes, parents,
                      node.kind == NodeKind::kChance && node.world);
    builder.SetCpt(node.name, InterventionRows(model, node, kept, spec));
  }
  CidModel result = builder.Build();
  result.RequireValid();
  return result;
}

CidModel TwinNetwork(const ScmModel& scm, const InterventionSpec& spec) {
  const CidModel& base = scm.base;
  base.RequireValid();
  for (const auto& [chance, noise] : scm.noise_of) {
    if (base.IndexOf(chance) < 0 || base.IndexOf(noise) < 0) {
      Fail(ErrorCode::kUsage, "noise map entry '" + chance + "' -> '" + noise +
                                  "' names a missing node");
    }
  }

  // Interventions live on the counterfactual side; translate them to base
  // names once so row construction can share InterventionRows.
  InterventionSpec on_base;
  auto check_twin_target = [&](const std::string& name) {
    if (!IsTwinName(name)) {
      Fail(ErrorCode::kUsage, "twin interventions target counterfactual "
                              "copies; '" +
                                  name + "' lacks the '" + kTwinSuffix +
                                  "' suffix");
    }
    std::string source = StripTwinSuffix(name);
    int idx = base.IndexOf(source);
    if (idx < 0) {
      Fail(ErrorCode::kUsage,
           "intervention '" + name + "' has no source node '" + source + "'");
    }
    if (scm.IsNoise(source)) {
      Fail(ErrorCode::kUsage,
           "noise node '" + source + "' cannot be intervened");
    }
    if (base.node(idx).kind == NodeKind::kUtility) {
      Fail(ErrorCode::kUsage,
           "utility node '" + source + "' cannot be intervened");
    }
    return source;
  };
  for (const auto& [name, outcome] : spec.force) {
    on_base.force[check_twin_target(name)] = outcome;
  }
  for (const auto& [name, rows] : spec.replace) {
    on_base.replace[check_twin_target(name)] = rows;
  }
  for (const auto& [source, outcome] : on_base.force) {
    if (on_base.replace.count(source)) {
      Fail(ErrorCode::kUsage, "node '" + source + kTwinSuffix +
                                  "' has both a forced outcome and a "
                                  "replacement");
    }
  }

  CidModelBuilder builder;
  for (const std::string& agent : base.agents()) builder.AddAgent(agent);
  for (int i = 0; i < base.num_nodes(); ++i) {
    const Node& node = base.node(i);
    std::vector<std::string> parents = ParentNames(base, i);
    switch (node.kind) {
      case NodeKind::kChance:
        builder.AddChance(node.name, node.outcomes, parents, node.world);
        builder.SetCpt(node.name, base.cpt(i)->rows);
        break;
      case NodeKind::kDecision:
        builder.AddDecision(node.name, node.agent, node.outcomes, parents);
        break;
      case NodeKind::kUtility:
        builder.AddUtility(node.name, node.agent, parents);
        builder.SetUtility(node.name, base.utility(i)->values);
        break;
    }
  }
  for (int i = 0; i < base.num_nodes(); ++i) {
    const Node& node = base.node(i);
    if (scm.IsNoise(node.name)) continue;
    if (IsTwinName(node.name)) {
      Fail(ErrorCode::kUsage, "node '" + node.name +
                                  "' uses the reserved counterfactual suffix '" +
                                  kTwinSuffix + "'");
    }
    std::string copy = node.name + kTwinSuffix;
    auto mapped = [&](const std::vector<int>& idxs) {
      std::vector<std::string> out;
      for (int p : idxs) {
        const std::string& pname = base.node(p).name;
        out.push_back(scm.IsNoise(pname) ? pname : pname + kTwinSuffix);
      }
      return out;
    };
    bool hit = on_base.force.count(node.name) || on_base.replace.count(node.name);
    switch (node.kind) {
      case NodeKind::kChance:
        builder.AddChance(copy, node.outcomes, mapped(node.parents),
                          node.world);
        builder.SetCpt(copy, hit ? InterventionRows(base, node, node.parents,
                                                    on_base)
                                 : base.cpt(i)->rows);
        break;
      case NodeKind::kDecision:
        if (hit) {
          std::vector<int> kept = KeptParents(base, node);
          builder.AddChance(copy, node.outcomes, mapped(kept));
          builder.SetCpt(copy, InterventionRows(base, node, kept, on_base));
        } else {
          builder.AddDecision(copy, node.agent, node.outcomes,
                              mapped(node.parents));
        }
        break;
      case NodeKind::kUtility:
        builder.AddUtility(copy, node.agent, mapped(node.parents));
        builder.SetUtility(copy, base.utility(i)->values);
        break;
    }
  }
  CidModel twin = builder.Build();
  twin.RequireValid();
  return twin;
}

Factor CounterfactualQuery(const ScmModel& scm, const InterventionSpec& spec,
                           const Evidence& evidence,
                           const std::vector<std::string>& targets,
                           const PolicyProfile& profile) {
  CidModel twin = TwinNetwork(scm, spec);
  PolicyProfile full;
  for (int i = 0; i < twin.num_nodes(); ++i) {
    if (twin.node(i).kind != NodeKind::kDecision) continue;
    const std::string& name = twin.node(i).name;
    std::string source = IsTwinName(name) ? StripTwinSuffix(name) : name;
    auto it = profile.rules.find(source);
    if (it == profile.rules.end()) {
      Fail(ErrorCode::kUsage,
           "policy profile has no rule for decision '" + source + "'");
    }
    full.rules[name] = it->second;
  }
  InducedNetwork net = InduceNetwork(twin, full);
  return Marginal(net, targets, evidence);
}

}  // namespace cid
