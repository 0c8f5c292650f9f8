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

#include "cid/inference.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <set>

namespace cid {
namespace {

std::vector<int> ScopeSizes(const InducedNetwork& net, const std::vector<int>& scope) {
  std::vector<int> sizes;
  sizes.reserve(scope.size());
  for (int v : scope) sizes.push_back(static_cast<int>(net.outcomes[v].size()));
  return sizes;
}

void CheckFactorSize(const std::vector<int>& sizes) {
  std::uint64_t count = 1;
  for (int s : sizes) {
    count *= static_cast<std::uint64_t>(s);
    if (count > MaxFactorEntries()) {
      Fail(ErrorCode::kResource,
           "factor would exceed the cap of " + std::to_string(MaxFactorEntries()) + " entries");
    }
  }
}

// The CPT of node i as a factor over sorted {parents, i}.
Factor NodeFactor(const InducedNetwork& net, int i) {
  Factor f;
  f.scope = net.parents[i];
  f.scope.push_back(i);
  std::sort(f.scope.begin(), f.scope.end());

  const std::vector<int> sizes = ScopeSizes(net, f.scope);
  CheckFactorSize(sizes);
  ConfigIndexer out(sizes);

  // Positions of the CPT axes (parents in declaration order, then the node)
  // inside the sorted scope.
  std::vector<int> axis;
  for (int p : net.parents[i]) {
    axis.push_back(static_cast<int>(
        std::lower_bound(f.scope.begin(), f.scope.end(), p) - f.scope.begin()));
  }
  const int self_axis = static_cast<int>(
      std::lower_bound(f.scope.begin(), f.scope.end(), i) - f.scope.begin());

  ConfigIndexer rows(ScopeSizes(net, net.parents[i]));
  f.values.assign(out.count(), 0.0);
  std::vector<int> digits(f.scope.size(), 0);
  for (std::int64_t r = 0; r < rows.count(); ++r) {
    const std::vector<int> row_digits = rows.DigitsOf(r);
    for (size_t a = 0; a < axis.size(); ++a) digits[axis[a]] = row_digits[a];
    const auto& row = net.cpts[i].rows[r];
    for (size_t o = 0; o < row.size(); ++o) {
      digits[self_axis] = static_cast<int>(o);
      f.values[out.IndexOf(digits)] = row[o];
    }
  }
  return f;
}

Factor Multiply(const InducedNetwork& net, const Factor& a, const Factor& b) {
  Factor f;
  std::set_union(a.scope.begin(), a.scope.end(), b.scope.begin(), b.scope.end(),
                 std::back_inserter(f.scope));
  const std::vector<int> sizes = ScopeSizes(net, f.scope);
  CheckFactorSize(sizes);
  ConfigIndexer out(sizes);
  ConfigIndexer ia(ScopeSizes(net, a.scope));
  ConfigIndexer ib(ScopeSizes(net, b.scope));

  // Map each operand axis to its position in the merged scope.
  auto positions = [&f](const std::vector<int>& scope) {
    std::vector<int> pos;
    for (int v : scope) {
      pos.push_back(static_cast<int>(
          std::lower_bound(f.scope.begin(), f.scope.end(), v) - f.scope.begin()));
    }
    return pos;
  };
  const std::vector<int> pa = positions(a.scope);
  const std::vector<int> pb = positions(b.scope);

  f.values.assign(out.count(), 0.0);
  std::vector<int> da(a.scope.size()), db(b.scope.size());
  for (std::int64_t idx = 0; idx < out.count(); ++idx) {
    const std::vector<int> digits = out.DigitsOf(idx);
    for (size_t k = 0; k < pa.size(); ++k) da[k] = digits[pa[k]];
    for (size_t k = 0; k < pb.size(); ++k) db[k] = digits[pb[k]];
    f.values[idx] = a.values[ia.IndexOf(da)] * b.values[ib.IndexOf(db)];
  }
  return f;
}

Factor SumOut(const InducedNetwork& net, const Factor& a, int var) {
  Factor f;
  int drop = -1;
  for (size_t k = 0; k < a.scope.size(); ++k) {
    if (a.scope[k] == var) {
      drop = static_cast<int>(k);
    } else {
      f.scope.push_back(a.scope[k]);
    }
  }
  ConfigIndexer ia(ScopeSizes(net, a.scope));
  ConfigIndexer out(ScopeSizes(net, f.scope));
  f.values.assign(out.count(), 0.0);
  for (std::int64_t idx = 0; idx < ia.count(); ++idx) {
    std::vector<int> digits = ia.DigitsOf(idx);
    digits.erase(digits.begin() + drop);
    f.values[out.IndexOf(digits)] += a.values[idx];
  }
  return f;
}

// Slices evidence out of a factor's scope.
Factor Reduce(const InducedNetwork& net, const Factor& a, int var, int value) {
  Factor f;
  int drop = -1;
  for (size_t k = 0; k < a.scope.size(); ++k) {
    if (a.scope[k] == var) {
      drop = static_cast<int>(k);
    } else {
      f.scope.push_back(a.scope[k]);
    }
  }
  if (drop < 0) return a;
  ConfigIndexer ia(ScopeSizes(net, a.scope));
  ConfigIndexer out(ScopeSizes(net, f.scope));
  f.values.assign(out.count(), 0.0);
  for (std::int64_t idx = 0; idx < out.count(); ++idx) {
    std::vector<int> digits = out.DigitsOf(idx);
    digits.insert(digits.begin() + drop, value);
    f.values[idx] = a.values[ia.IndexOf(digits)];
  }
  return f;
}

// Multiplies factors containing `var`, sums it out, returns the rest.
void EliminateVar(const InducedNetwork& net, std::vector<Factor>& factors, int var) {
  Factor combined;
  combined.values = {1.0};
  bool any = false;
  std::vector<Factor> rest;
  for (auto& f : factors) {
    if (std::find(f.scope.begin(), f.scope.end(), var) != f.scope.end()) {
      combined = any ? Multiply(net, combined, f) : std::move(f);
      any = true;
    } else {
      rest.push_back(std::move(f));
    }
  }
  if (any) rest.push_back(SumOut(net, combined, var));
  factors = std::move(rest);
}

// Unnormalized VE; afterwards `factors` only mention kept variables.
std::vector<Factor> RunElimination(const InducedNetwork& net, std::vector<Factor> factors,
                                   const std::set<int>& keep) {
  // Interaction graph over the variables still present.
  std::set<int> vars;
  for (const auto& f : factors) vars.insert(f.scope.begin(), f.scope.end());
  std::map<int, std::set<int>> neighbors;
  for (int v : vars) neighbors[v] = {};
  for (const auto& f : factors) {
    for (int a : f.scope) {
      for (int b : f.scope) {
        if (a != b) neighbors[a].insert(b);
      }
    }
  }
  while (true) {
    // Min-degree elimination, declaration order breaking ties.
    int pick = -1;
    size_t best = 0;
    for (const auto& [v, adj] : neighbors) {
      if (keep.count(v)) continue;
      if (pick < 0 || adj.size() < best) {
        pick = v;
        best = adj.size();
      }
    }
    if (pick < 0) break;
    EliminateVar(net, factors, pick);
    for (int n : neighbors[pick]) {
      neighbors[n].erase(pick);
      for (int other : neighbors[pick]) {
        if (other != n) neighbors[n].insert(other);
      }
    }
    neighbors.erase(pick);
  }
  return factors;
}

}  // namespace

Factor Marginal(const InducedNetwork& net, const std::vector<std::string>& targets,
                const Evidence& evidence) {
  if (targets.empty()) Fail(ErrorCode::kUsage, "no marginal targets given");
  std::set<int> target_set;
  for (const auto& t : targets) {
    if (!target_set.insert(net.RequireNode(t)).second) {
      Fail(ErrorCode::kUsage, "duplicate target '" + t + "'");
    }
  }
  std::map<int, int> observed;  // node -> outcome index
  for (const auto& [name, label] : evidence) {
    const int v = net.RequireNode(name);
    if (target_set.count(v)) {
      Fail(ErrorCode::kUsage, "'" + name + "' cannot be both target and evidence");
    }
    observed[v] = net.OutcomeIndex(v, label);
  }

  std::vector<Factor> factors;
  for (int i = 0; i < net.num_nodes(); ++i) {
    Factor f = NodeFactor(net, i);
    for (const auto& [v, value] : observed) f = Reduce(net, f, v, value);
    factors.push_back(std::move(f));
  }
  factors = RunElimination(net, std::move(factors), target_set);

  Factor result;
  result.values = {1.0};
  for (const auto& f : factors) result = Multiply(net, result, f);

  double z = 0.0;
  for (double v : result.values) z += v;
  if (z <= 0.0) Fail(ErrorCode::kEvidence, "impossible evidence: the condition has probability 0");
  for (double& v : result.values) v /= z;
  return result;
}

double JointProbability(const InducedNetwork& net,
                        const std::map<std::string, std::string>& assignment) {
  std::vector<int> value(net.num_nodes(), -1);
  for (const auto& [name, label] : assignment) {
    const int v = net.RequireNode(name);
    value[v] = net.OutcomeIndex(v, label);
  }
  for (int i = 0; i < net.num_nodes(); ++i) {
    if (value[i] < 0) {
      Fail(ErrorCode::kUsage, "joint assignment misses node '" + net.names[i] + "'");
    }
  }
  double p = 1.0;
  for (int i = 0; i < net.num_nodes(); ++i) {
    std::vector<int> digits;
    digits.reserve(net.parents[i].size());
    for (int q : net.parents[i]) digits.push_back(value[q]);
    ConfigIndexer rows(ScopeSizes(net, net.parents[i]));
    p *= net.cpts[i].rows[rows.IndexOf(digits)][value[i]];
  }
  return p;
}

double ExpectedUtility(const CidModel& model, const PolicyProfile& profile,
                       const std::string& agent) {
  model.RequireAgent(agent);
  const InducedNetwork net = InduceNetwork(model, profile);
  double total = 0.0;
  for (int u : model.UtilitiesOf(agent)) {
    const Factor f = Marginal(net, {model.node(u).name}, {});
    const auto& values = model.UtilityValues(u);
    for (size_t o = 0; o < values.size(); ++o) total += values[o] * f.values[o];
  }
  return total;
}

// --- d-separation -----------------------------------------------------------

namespace {

std::vector<int> ResolveSet(const CidModel& model, const std::vector<std::string>& names,
                            const char* what) {
  std::vector<int> out;
  std::set<int> seen;
  for (const auto& n : names) {
    const int i = model.RequireNode(n);
    if (!seen.insert(i).second) {
      Fail(ErrorCode::kUsage, std::string(what) + " contains '" + n + "' twice");
    }
    out.push_back(i);
  }
  return out;
}

}  // namespace

std::optional<std::vector<std::string>> FindActivePath(const CidModel& model,
                                                       const std::vector<std::string>& xs,
                                                       const std::vector<std::string>& ys,
                                                       const std::vector<std::string>& zs) {
  const std::vector<int> x = ResolveSet(model, xs, "X");
  const std::vector<int> y = ResolveSet(model, ys, "Y");
  const std::vector<int> z = ResolveSet(model, zs, "Z");
  if (x.empty() || y.empty()) Fail(ErrorCode::kUsage, "X and Y must be nonempty");
  std::set<int> in_x(x.begin(), x.end()), in_y(y.begin(), y.end()), in_z(z.begin(), z.end());
  for (int v : x) {
    if (in_y.count(v) || in_z.count(v)) {
      Fail(ErrorCode::kUsage, "X, Y and Z must be pairwise disjoint");
    }
  }
  for (int v : y) {
    if (in_z.count(v)) Fail(ErrorCode::kUsage, "X, Y and Z must be pairwise disjoint");
  }

  // Z together with its ancestors: the nodes that open colliders.
  std::set<int> opens;
  for (int v : z) {
    opens.insert(v);
    for (int a : model.Ancestors(v)) opens.insert(a);
  }

  // Trail reachability over states (node, arrived-from-below?). kUp means the
  // trail may leave through parents and children; kDown (arrived from a
  // parent) continues through children, or bounces to parents at an opened
  // collider.
  constexpr int kUp = 0, kDown = 1;
  const int n = model.num_nodes();
  std::vector<std::array<int, 2>> pred(n, {-2, -2});  // -2 unvisited, -1 start
  std::deque<std::pair<int, int>> queue;
  for (int v : x) {
    pred[v][kUp] = -1;
    queue.emplace_back(v, kUp);
  }

  auto visit = [&](int node, int dir, int from_state) {
    if (pred[node][dir] != -2) return;
    pred[node][dir] = from_state;
    queue.emplace_back(node, dir);
  };
  auto encode = [n](int node, int dir) { return dir * n + node; };

  int hit_state = -1;
  while (!queue.empty() && hit_state < 0) {
    const auto [v, dir] = queue.front();
    queue.pop_front();
    if (in_y.count(v)) {
      hit_state = encode(v, dir);
      break;
    }
    const int self = encode(v, dir);
    if (dir == kUp && !in_z.count(v)) {
      for (int p : model.node(v).parents) visit(p, kUp, self);
      for (int c : model.Children(v)) visit(c, kDown, self);
    } else if (dir == kDown) {
      if (!in_z.count(v)) {
        for (int c : model.Children(v)) visit(c, kDown, self);
      }
      if (opens.count(v)) {
        for (int p : model.node(v).parents) visit(p, kUp, self);
      }
    }
  }
  if (hit_state < 0) return std::nullopt;

  std::vector<std::string> path;
  for (int s = hit_state; s != -1; s = pred[s % n][s / n]) {
    path.push_back(model.node(s % n).name);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

bool DSeparated(const CidModel& model, const std::vector<std::string>& xs,
                const std::vector<std::string>& ys, const std::vector<std::string>& zs) {
  return !FindActivePath(model, xs, ys, zs).has_value();
}

// --- Mediation --------------------------------------------------------------

std::optional<std::vector<std::string>> FindDirectedPath(const CidModel& model, int from, int to) {
  std::vector<int> pred(model.num_nodes(), -2);
  pred[from] = -1;
  std::deque<int> queue = {from};
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    if (v == to) {
      std::vector<std::string> path;
      for (int s = v; s != -1; s = pred[s]) path.push_back(model.node(s).name);
      std::reverse(path.begin(), path.end());
      return path;
    }
    for (int c : model.Children(v)) {
      if (pred[c] == -2) {
        pred[c] = v;
        queue.push_back(c);
      }
    }
  }
  return std::nullopt;
}

bool Mediates(const CidModel& model, const std::string& from, const std::string& to,
              const std::vector<std::string>& via) {
  const int a = model.RequireNode(from);
  const int b = model.RequireNode(to);
  if (a == b) Fail(ErrorCode::kUsage, "source and target must differ");
  std::set<int> blocked;
  for (const auto& m : via) {
    const int v = model.RequireNode(m);
    if (v == a || v == b) {
      Fail(ErrorCode::kUsage, "mediator set must exclude the endpoints");
    }
    blocked.insert(v);
  }
  // Reachability along directed edges avoiding the mediators.
  std::vector<char> seen(model.num_nodes(), 0);
  std::vector<int> stack = {a};
  seen[a] = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    if (v == b) return false;
    for (int c : model.Children(v)) {
      if (!seen[c] && !blocked.count(c)) {
        seen[c] = 1;
        stack.push_back(c);
      }
    }
  }
  return true;
}

}  // namespace cid
