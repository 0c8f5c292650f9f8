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

#include "cid/dot.hpp"

#include <string>

namespace cid {
namespace {

constexpr const char* kPalette[8] = {
    "#66c2a5", "#fc8d62", "#8da0cb", "#e78ac3",
    "#a6d854", "#ffd92f", "#e5c494", "#b3b3b3",
};

const char* ShapeOf(NodeKind kind) {
  switch (kind) {
    case NodeKind::kChance:
      return "ellipse";
    case NodeKind::kDecision:
      return "box";
    case NodeKind::kUtility:
      return "diamond";
  }
  return "ellipse";
}

}  // namespace

std::string ExportDot(const CidModel& model, bool color_agents) {
  model.RequireValid();
  std::string out = "digraph cid {\n  rankdir=LR;\n";
  for (int i = 0; i < model.num_nodes(); ++i) {
    const Node& node = model.node(i);
    out += "  \"" + node.name + "\" [shape=" + ShapeOf(node.kind);
    if (color_agents && node.kind != NodeKind::kChance) {
      int slot = -1;
      const auto& agents = model.agents();
      for (int a = 0; a < static_cast<int>(agents.size()); ++a) {
        if (agents[a] == node.agent) slot = a;
      }
      if (slot >= 0) {
        out += ", style=filled, fillcolor=\"";
        out += kPalette[slot % 8];
        out += "\"";
      }
    }
    out += "];\n";
  }
  for (int i = 0; i < model.num_nodes(); ++i) {
    const Node& node = model.node(i);
    for (int p : node.parents) {
      out += "  \"" + model.node(p).name + "\" -> \"" + node.name + "\"";
      if (node.kind == NodeKind::kDecision) out += " [style=dashed]";
      out += ";\n";
    }
  }
  out += "}\n";
  return out;
}

}  // namespace cid
