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

#include "oracles.hpp"

#include <algorithm>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace cid {
namespace test {
namespace {

constexpr std::int64_t kOracleStateCap = std::int64_t{1} << 20;

std::vector<int> DomainSizes(const InducedNetwork& net) {
  std::vector<int> sizes;
  sizes.reserve(net.num_nodes());
  for (const auto& dom : net.outcomes) sizes.push_back(static_cast<int>(dom.size()));
  return sizes;
}

std::int64_t RowOf(const std::vector<int>& parents, const std::vector<int>& sizes,
                   const std::vector<int>& digits) {
  std::int64_t row = 0;
  for (int p : parents) row = row * sizes[p] + digits[p];
  return row;
}

}  // namespace

std::vector<double> BruteJoint(const InducedNetwork& net) {
  std::vector<int> sizes = DomainSizes(net);
  std::int64_t count = 1;
  for (int s : sizes) {
    count *= s;
    if (count > kOracleStateCap) {
      throw std::runtime_error("oracle state space too large");
    }
  }
  std::vector<double> joint(static_cast<std::size_t>(count), 0.0);
  std::vector<int> digits(net.num_nodes(), 0);
  for (std::int64_t s = 0; s < count; ++s) {
    double p = 1.0;
    for (int i = 0; i < net.num_nodes() && p != 0.0; ++i) {
      std::int64_t row = RowOf(net.parents[i], sizes, digits);
      p *= net.cpts[i].rows[static_cast<std::size_t>(row)][digits[i]];
    }
    joint[static_cast<std::size_t>(s)] = p;
    for (int i = net.num_nodes() - 1; i >= 0; --i) {
      if (++digits[i] < sizes[i]) break;
      digits[i] = 0;
    }
  }
  return joint;
}

std::optional<std::vector<double>> BruteMarginal(
    const InducedNetwork& net, const std::vector<std::string>& targets,
    const Evidence& evidence) {
  std::vector<int> sizes = DomainSizes(net);
  std::vector<double> joint = BruteJoint(net);

  std::vector<int> target_idx;
  for (const std::string& t : targets) target_idx.push_back(net.RequireNode(t));
  std::sort(target_idx.begin(), target_idx.end());
  std::vector<int> target_sizes;
  std::int64_t cells = 1;
  for (int t : target_idx) {
    target_sizes.push_back(sizes[t]);
    cells *= sizes[t];
  }
  std::map<int, int> required;  // node -> outcome digit
  for (const auto& [name, label] : evidence) {
    int i = net.RequireNode(name);
    required[i] = net.OutcomeIndex(i, label);
  }

  std::vector<double> out(static_cast<std::size_t>(cells), 0.0);
  double total = 0.0;
  std::vector<int> digits(net.num_nodes(), 0);
  for (std::size_t s = 0; s < joint.size(); ++s) {
    bool keep = true;
    for (const auto& [node, digit] : required) {
      if (digits[node] != digit) {
        keep = false;
        break;
      }
    }
    if (keep && joint[s] != 0.0) {
      total += joint[s];
      std::int64_t cell = 0;
      for (std::size_t k = 0; k < target_idx.size(); ++k) {
        cell = cell * target_sizes[k] + digits[target_idx[k]];
      }
      out[static_cast<std::size_t>(cell)] += joint[s];
    }
    for (int i = net.num_nodes() - 1; i >= 0; --i) {
      if (++digits[i] < sizes[i]) break;
      digits[i] = 0;
    }
  }
  if (total <= 0.0) return std::nullopt;
  for (double& v : out) v /= total;
  return out;
}

double BruteExpectedUtility(const CidModel& model, const PolicyProfile& profile,
                            const std::string& agent) {
  model.RequireValid();
  model.RequireAgent(agent);
  std::vector<int> sizes(model.num_nodes(), 0);
  std::vector<int> enum_nodes;
  std::int64_t count = 1;
  for (int i = 0; i < model.num_nodes(); ++i) {
    sizes[i] = static_cast<int>(model.node(i).outcomes.size());
    if (model.node(i).kind == NodeKind::kUtility) continue;
    enum_nodes.push_back(i);
    count *= sizes[i];
    if (count > kOracleStateCap) {
      throw std::runtime_error("oracle state space too large");
    }
  }
  const std::vector<int>& topo = model.TopologicalOrder();
  std::vector<int> utilities = model.UtilitiesOf(agent);

  double eu = 0.0;
  std::vector<int> free_digits(enum_nodes.size(), 0);
  std::vector<int> digits(model.num_nodes(), 0);
  for (std::int64_t s = 0; s < count; ++s) {
    for (std::size_t k = 0; k < enum_nodes.size(); ++k) {
      digits[enum_nodes[k]] = free_digits[k];
    }
    double p = 1.0;
    for (int i : topo) {
      const Node& node = model.node(i);
      std::int64_t row = RowOf(node.parents, sizes, digits);
      if (node.kind == NodeKind::kChance) {
        p *= model.cpt(i)->rows[static_cast<std::size_t>(row)][digits[i]];
      } else if (node.kind == NodeKind::kDecision) {
        p *= profile.rules.at(node.name).rows[static_cast<std::size_t>(row)][digits[i]];
      } else {
        digits[i] = model.UtilityOutcomeIndex(i, row);
      }
      if (p == 0.0) break;
    }
    if (p != 0.0) {
      for (int u : utilities) {
        std::int64_t row = RowOf(model.node(u).parents, sizes, digits);
        eu += p * model.utility(u)->values[static_cast<std::size_t>(row)];
      }
    }
    for (int k = static_cast<int>(enum_nodes.size()) - 1; k >= 0; --k) {
      if (++free_digits[k] < sizes[enum_nodes[k]]) break;
      free_digits[k] = 0;
    }
  }
  return eu;
}

double BruteBestValue(const CidModel& model, const std::string& agent,
                      const PolicyProfile& fixed) {
  std::vector<int> decisions = model.DecisionsOf(agent);
  struct Slot {
    int node;
    std::int64_t row;
  };
  std::vector<Slot> slots;
  std::int64_t combos = 1;
  for (int d : decisions) {
    std::int64_t rows = model.ParentConfigCount(d);
    int actions = static_cast<int>(model.node(d).outcomes.size());
    for (std::int64_t r = 0; r < rows; ++r) {
      slots.push_back({d, r});
      combos *= actions;
      if (combos > kOracleStateCap) {
        throw std::runtime_error("oracle policy space too large");
      }
    }
  }

  double best = 0.0;
  bool first = true;
  std::vector<int> choice(slots.size(), 0);
  for (std::int64_t c = 0; c < combos; ++c) {
    PolicyProfile profile = fixed;
    for (int d : decisions) {
      DecisionRule rule;
      rule.rows.assign(
          static_cast<std::size_t>(model.ParentConfigCount(d)),
          std::vector<double>(model.node(d).outcomes.size(), 0.0));
      profile.rules[model.node(d).name] = rule;
    }
    for (std::size_t k = 0; k < slots.size(); ++k) {
      profile.rules[model.node(slots[k].node).name]
          .rows[static_cast<std::size_t>(slots[k].row)][choice[k]] = 1.0;
    }
    double v = BruteExpectedUtility(model, profile, agent);
    if (first || v > best) {
      best = v;
      first = false;
    }
    for (int k = static_cast<int>(slots.size()) - 1; k >= 0; --k) {
      if (++choice[k] < static_cast<int>(model.node(slots[k].node).outcomes.size())) {
        break;
      }
      choice[k] = 0;
    }
  }
  return best;
}

namespace {

// Tests one candidate trail for d-connection given Z.
bool TrailActive(const CidModel& model, const std::vector<int>& path,
                 const std::set<int>& zs) {
  for (std::size_t k = 1; k + 1 < path.size(); ++k) {
    int prev = path[k - 1];
    int v = path[k];
    int next = path[k + 1];
    bool collider = model.HasEdge(prev, v) && model.HasEdge(next, v);
    if (collider) {
      bool anchored = zs.count(v) > 0;
      if (!anchored) {
        for (int d : model.Descendants(v)) {
          if (zs.count(d)) {
            anchored = true;
            break;
          }
        }
      }
      if (!anchored) return false;
    } else if (zs.count(v)) {
      return false;
    }
  }
  return true;
}

bool AnyActiveTrail(const CidModel& model, int v, const std::set<int>& ys,
                    const std::set<int>& zs, std::vector<int>* path,
                    std::vector<bool>* on_path) {
  if (ys.count(v) && path->size() > 1) return TrailActive(model, *path, zs);
  if (ys.count(v)) return false;  // trails through another x-start are covered separately
  std::vector<int> neighbors = model.node(v).parents;
  for (int c : model.Children(v)) neighbors.push_back(c);
  for (int n : neighbors) {
    if ((*on_path)[n]) continue;
    path->push_back(n);
    (*on_path)[n] = true;
    bool found = AnyActiveTrail(model, n, ys, zs, path, on_path);
    (*on_path)[n] = false;
    path->pop_back();
    if (found) return true;
  }
  return false;
}

}  // namespace

bool BruteDSeparated(const CidModel& model, const std::vector<std::string>& xs,
                     const std::vector<std::string>& ys,
                     const std::vector<std::string>& zs) {
  std::set<int> y_set, z_set;
  for (const std::string& y : ys) y_set.insert(model.RequireNode(y));
  for (const std::string& z : zs) z_set.insert(model.RequireNode(z));
  for (const std::string& x : xs) {
    int start = model.RequireNode(x);
    std::vector<int> path{start};
    std::vector<bool> on_path(model.num_nodes(), false);
    on_path[start] = true;
    std::vector<int> neighbors = model.node(start).parents;
    for (int c : model.Children(start)) neighbors.push_back(c);
    for (int n : neighbors) {
      path.push_back(n);
      on_path[n] = true;
      bool found = AnyActiveTrail(model, n, y_set, z_set, &path, &on_path);
      on_path[n] = false;
      path.pop_back();
      if (found) return false;
    }
  }
  return true;
}

namespace {

struct ResponseSet {
  std::int64_t configs = 1;
  int arity = 0;
  std::vector<std::int64_t> fns;  // kept function codes
  std::vector<double> probs;
};

// Function code t maps parent configuration c to digit
// (t / arity^(configs-1-c)) % arity, the last configuration fastest.
int FnDigit(const ResponseSet& rs, std::int64_t t, std::int64_t config) {
  std::int64_t div = 1;
  for (std::int64_t k = config + 1; k < rs.configs; ++k) div *= rs.arity;
  return static_cast<int>((t / div) % rs.arity);
}

}  // namespace

std::optional<std::vector<double>> BruteCounterfactual(
    const CidModel& model, const PolicyProfile& profile,
    const Evidence& evidence, const std::map<std::string, std::string>& do_map,
    const std::string& target) {
  model.RequireValid();
  std::vector<int> sizes(model.num_nodes(), 0);
  for (int i = 0; i < model.num_nodes(); ++i) {
    sizes[i] = static_cast<int>(model.node(i).outcomes.size());
  }

  std::map<int, ResponseSet> responses;  // chance node -> kept functions
  std::vector<int> decisions;
  for (int i = 0; i < model.num_nodes(); ++i) {
    const Node& node = model.node(i);
    if (node.kind == NodeKind::kDecision) {
      decisions.push_back(i);
      continue;
    }
    if (node.kind != NodeKind::kChance) continue;
    ResponseSet rs;
    rs.configs = model.ParentConfigCount(i);
    rs.arity = sizes[i];
    std::int64_t all = 1;
    for (std::int64_t c = 0; c < rs.configs; ++c) {
      all *= rs.arity;
      if (all > kOracleStateCap) {
        throw std::runtime_error("oracle response space too large");
      }
    }
    const Cpt& cpt = *model.cpt(i);
    for (std::int64_t t = 0; t < all; ++t) {
      double p = 1.0;
      for (std::int64_t c = 0; c < rs.configs && p != 0.0; ++c) {
        p *= cpt.rows[static_cast<std::size_t>(c)][FnDigit(rs, t, c)];
      }
      if (p != 0.0) {
        rs.fns.push_back(t);
        rs.probs.push_back(p);
      }
    }
    responses[i] = std::move(rs);
  }

  // Forced outcomes on "_cf" copies, keyed by base node index.
  std::map<int, int> forced;
  for (const auto& [name, label] : do_map) {
    std::string base = name.substr(0, name.size() - 3);
    int i = model.RequireNode(base);
    int digit = -1;
    for (int k = 0; k < sizes[i]; ++k) {
      if (model.node(i).outcomes[k] == label) digit = k;
    }
    if (digit < 0) throw std::runtime_error("oracle: bad forced outcome");
    forced[i] = digit;
  }

  // Enumeration dimensions: one per chance node (its kept functions), one per
  // decision per copy (its actions), skipping forced twin decisions.
  struct Dim {
    enum Kind { kFn, kActF, kActT } kind;
    int node;
  };
  std::vector<Dim> dims;
  std::vector<int> dim_sizes;
  std::int64_t count = 1;
  for (const auto& [i, rs] : responses) {
    dims.push_back({Dim::kFn, i});
    dim_sizes.push_back(static_cast<int>(rs.fns.size()));
    count *= static_cast<std::int64_t>(rs.fns.size());
  }
  for (int d : decisions) {
    dims.push_back({Dim::kActF, d});
    dim_sizes.push_back(sizes[d]);
    count *= sizes[d];
    if (!forced.count(d)) {
      dims.push_back({Dim::kActT, d});
      dim_sizes.push_back(sizes[d]);
      count *= sizes[d];
    }
    if (count > kOracleStateCap) {
      throw std::runtime_error("oracle counterfactual space too large");
    }
  }

  auto lookup = [&](const std::string& name, const std::vector<int>& f,
                    const std::vector<int>& t) -> int {
    if (name.size() > 3 && name.compare(name.size() - 3, 3, "_cf") == 0) {
      return t[model.RequireNode(name.substr(0, name.size() - 3))];
    }
    return f[model.RequireNode(name)];
  };

  int target_node =
      model.RequireNode(target.size() > 3 && target.compare(target.size() - 3, 3, "_cf") == 0
                            ? target.substr(0, target.size() - 3)
                            : target);
  std::vector<double> dist(static_cast<std::size_t>(sizes[target_node]), 0.0);
  double total = 0.0;

  const std::vector<int>& topo = model.TopologicalOrder();
  std::vector<int> choice(dims.size(), 0);
  std::vector<int> fn_of(model.num_nodes(), 0);
  std::vector<int> act_f(model.num_nodes(), 0);
  std::vector<int> act_t(model.num_nodes(), 0);
  for (std::int64_t s = 0; s < count; ++s) {
    double w = 1.0;
    for (std::size_t k = 0; k < dims.size(); ++k) {
      switch (dims[k].kind) {
        case Dim::kFn: {
          const ResponseSet& rs = responses.at(dims[k].node);
          fn_of[dims[k].node] = choice[k];
          w *= rs.probs[choice[k]];
          break;
        }
        case Dim::kActF:
          act_f[dims[k].node] = choice[k];
          break;
        case Dim::kActT:
          act_t[dims[k].node] = choice[k];
          break;
      }
    }

    std::vector<int> f(model.num_nodes(), 0);
    std::vector<int> t(model.num_nodes(), 0);
    for (int i : topo) {
      const Node& node = model.node(i);
      std::int64_t row = RowOf(node.parents, sizes, f);
      if (node.kind == NodeKind::kChance) {
        const ResponseSet& rs = responses.at(i);
        f[i] = FnDigit(rs, rs.fns[fn_of[i]], row);
      } else if (node.kind == NodeKind::kDecision) {
        f[i] = act_f[i];
        w *= profile.rules.at(node.name).rows[static_cast<std::size_t>(row)][f[i]];
      } else {
        f[i] = model.UtilityOutcomeIndex(i, row);
      }
      if (w == 0.0) break;
    }
    if (w != 0.0) {
      for (int i : topo) {
        auto hit = forced.find(i);
        if (hit != forced.end()) {
          t[i] = hit->second;
          continue;
        }
        const Node& node = model.node(i);
        std::int64_t row = RowOf(node.parents, sizes, t);
        if (node.kind == NodeKind::kChance) {
          const ResponseSet& rs = responses.at(i);
          t[i] = FnDigit(rs, rs.fns[fn_of[i]], row);
        } else if (node.kind == NodeKind::kDecision) {
          t[i] = act_t[i];
          w *= profile.rules.at(node.name).rows[static_cast<std::size_t>(row)][t[i]];
        } else {
          t[i] = model.UtilityOutcomeIndex(i, row);
        }
        if (w == 0.0) break;
      }
    }
    if (w != 0.0) {
      bool keep = true;
      for (const auto& [name, label] : evidence) {
        int i = model.RequireNode(
            name.size() > 3 && name.compare(name.size() - 3, 3, "_cf") == 0
                ? name.substr(0, name.size() - 3)
                : name);
        if (model.node(i).outcomes[lookup(name, f, t)] != label) {
          keep = false;
          break;
        }
      }
      if (keep) {
        total += w;
        dist[lookup(target, f, t)] += w;
      }
    }

    for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
      if (++choice[k] < dim_sizes[k]) break;
      choice[k] = 0;
    }
  }
  if (total <= 0.0) return std::nullopt;
  for (double& v : dist) v /= total;
  return dist;
}

CidModel RandomModel(std::mt19937& rng, const RandomModelOptions& options) {
  std::uniform_int_distribution<int> node_count(options.min_nodes,
                                                options.max_nodes);
  std::uniform_int_distribution<int> domain(2, options.max_outcomes);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> mass(0.05, 1.0);
  std::uniform_int_distribution<int> quarter(0, 8);

  int n = std::max(node_count(rng), 2 * options.num_agents);
  int first_utility = n - options.num_agents;

  std::vector<NodeKind> kinds(n, NodeKind::kChance);
  for (int a = 0; a < options.num_agents; ++a) {
    kinds[first_utility + a] = NodeKind::kUtility;
  }
  std::vector<int> decision_agent(n, -1);
  if (options.allow_decisions) {
    for (int a = 0; a < options.num_agents; ++a) {
      int d;
      do {
        d = std::uniform_int_distribution<int>(0, first_utility - 1)(rng);
      } while (kinds[d] == NodeKind::kDecision);
      kinds[d] = NodeKind::kDecision;
      decision_agent[d] = a;
    }
  }

  CidModelBuilder builder;
  std::vector<std::string> agent_names;
  for (int a = 0; a < options.num_agents; ++a) {
    agent_names.push_back("a" + std::to_string(a));
    builder.AddAgent(agent_names.back());
  }

  std::vector<std::string> names(n);
  std::vector<int> arity(n, 0);
  int util_seq = 0;
  for (int i = 0; i < n; ++i) {
    switch (kinds[i]) {
      case NodeKind::kChance:
        names[i] = "C" + std::to_string(i);
        break;
      case NodeKind::kDecision:
        names[i] = "D" + std::to_string(i);
        break;
      case NodeKind::kUtility:
        names[i] = "U" + std::to_string(util_seq++);
        break;
    }
  }

  for (int i = 0; i < n; ++i) {
    std::vector<std::string> parents;
    std::int64_t rows = 1;
    for (int j = 0; j < i; ++j) {
      // Utility nodes may only have decision children.
      if (kinds[j] == NodeKind::kUtility && kinds[i] != NodeKind::kDecision) {
        continue;
      }
      if (unit(rng) < options.edge_prob && rows * arity[j] <= options.max_rows) {
        parents.push_back(names[j]);
        rows *= arity[j];
      }
    }
    if (kinds[i] == NodeKind::kUtility && parents.empty() && i > 0) {
      for (int j = i - 1; j >= 0; --j) {
        if (kinds[j] != NodeKind::kUtility) {
          parents.push_back(names[j]);
          rows *= arity[j];
          break;
        }
      }
    }

    if (kinds[i] == NodeKind::kUtility) {
      builder.AddUtility(names[i], agent_names[i - first_utility], parents);
      std::vector<double> values(static_cast<std::size_t>(rows), 0.0);
      for (double& v : values) v = quarter(rng) / 4.0;
      builder.SetUtility(names[i], values);
      arity[i] = static_cast<int>(
          std::set<double>(values.begin(), values.end()).size());
      continue;
    }

    int k = domain(rng);
    arity[i] = k;
    std::vector<std::string> outcomes;
    for (int o = 0; o < k; ++o) {
      outcomes.push_back("v" + std::to_string(o));
    }
    if (kinds[i] == NodeKind::kDecision) {
      builder.AddDecision(names[i], agent_names[decision_agent[i]], outcomes,
                          parents);
    } else {
      bool world = options.world_tags && unit(rng) < 0.5;
      builder.AddChance(names[i], outcomes, parents, world);
      std::vector<std::vector<double>> cpt(
          static_cast<std::size_t>(rows), std::vector<double>(k, 0.0));
      for (auto& row : cpt) {
        double sum = 0.0;
        for (double& v : row) {
          v = mass(rng);
          sum += v;
        }
        for (double& v : row) v /= sum;
      }
      builder.SetCpt(names[i], cpt);
    }
  }
  return builder.Build();
}

CidModel CoinModel() {
  CidModelBuilder b;
  b.AddAgent("a");
  b.AddChance("C", {"heads", "tails"}, {}, /*world=*/true);
  b.SetCpt("C", {{0.5, 0.5}});
  b.AddDecision("D", "a", {"heads", "tails"}, {"C"});
  b.AddUtility("U", "a", {"C", "D"});
  b.SetUtility("U", {1.0, 0.0, 0.0, 1.0});
  return b.Build();
}

PolicyProfile RandomPureProfile(const CidModel& model, std::mt19937& rng) {
  PolicyProfile profile;
  for (int i = 0; i < model.num_nodes(); ++i) {
    if (model.node(i).kind != NodeKind::kDecision) continue;
    int actions = static_cast<int>(model.node(i).outcomes.size());
    std::uniform_int_distribution<int> pick(0, actions - 1);
    DecisionRule rule;
    rule.rows.assign(static_cast<std::size_t>(model.ParentConfigCount(i)),
                     std::vector<double>(actions, 0.0));
    for (auto& row : rule.rows) row[pick(rng)] = 1.0;
    profile.rules[model.node(i).name] = rule;
  }
  return profile;
}

std::map<std::string, std::string> RandomPositiveAssignment(
    const CidModel& model, const PolicyProfile& profile, std::mt19937& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<int> sizes(model.num_nodes(), 0);
  for (int i = 0; i < model.num_nodes(); ++i) {
    sizes[i] = static_cast<int>(model.node(i).outcomes.size());
  }
  std::vector<int> digits(model.num_nodes(), 0);
  std::map<std::string, std::string> out;
  for (int i : model.TopologicalOrder()) {
    const Node& node = model.node(i);
    std::int64_t row = RowOf(node.parents, sizes, digits);
    if (node.kind == NodeKind::kUtility) {
      digits[i] = model.UtilityOutcomeIndex(i, row);
    } else {
      const std::vector<double>& dist =
          node.kind == NodeKind::kChance
              ? model.cpt(i)->rows[static_cast<std::size_t>(row)]
              : profile.rules.at(node.name).rows[static_cast<std::size_t>(row)];
      double u = unit(rng);
      int picked = 0;
      double acc = 0.0;
      for (int k = 0; k < sizes[i]; ++k) {
        acc += dist[k];
        if (u <= acc || k == sizes[i] - 1) {
          picked = k;
          break;
        }
      }
      // Never settle on a zero-probability outcome.
      while (dist[picked] == 0.0) picked = (picked + 1) % sizes[i];
      digits[i] = picked;
    }
    out[node.name] = node.outcomes[digits[i]];
  }
  return out;
}

}  // namespace test
}  // namespace cid
