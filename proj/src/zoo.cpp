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

#include "cid/zoo.hpp"

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "cid/common.hpp"
#include "zoo_manifests.inc"

namespace cid {
namespace {

using nlohmann::json;

const std::vector<std::string>& EntryNames() {
  static const std::vector<std::string> names{
      "rl_mdp",          "rl_unknown_mdp",      "rl_pomdp",
      "modifiable_rf",   "current_rf",          "reward_modeling",
      "cirl",            "supervised_learning", "self_fulfilling",
      "counterfactual_oracle", "debate",        "debate_blind",
      "ida",             "cais",
  };
  return names;
}

// Typed access to string parameters with unknown-key detection.
class Params {
 public:
  Params(std::string entry, const ZooParams& given)
      : entry_(std::move(entry)), given_(given) {}

  int Int(const std::string& key, int def, int lo, int hi) {
    std::string raw = Raw(key, std::to_string(def));
    size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(raw, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != raw.size()) BadValue(key, raw, "an integer");
    if (value < lo || value > hi) {
      Fail(ErrorCode::kUsage, "zoo entry '" + entry_ + "': parameter '" + key +
                                  "' must be between " + std::to_string(lo) +
                                  " and " + std::to_string(hi));
    }
    return value;
  }

  bool Flag(const std::string& key, bool def) {
    std::string raw = Raw(key, def ? "1" : "0");
    if (raw == "1" || raw == "true") return true;
    if (raw == "0" || raw == "false") return false;
    BadValue(key, raw, "a flag (0/1/true/false)");
    return false;
  }

  std::string Choice(const std::string& key, const std::string& def,
                     const std::vector<std::string>& options) {
    std::string raw = Raw(key, def);
    for (const std::string& opt : options) {
      if (raw == opt) return raw;
    }
    std::string joined;
    for (const std::string& opt : options) {
      if (!joined.empty()) joined += ", ";
      joined += opt;
    }
    BadValue(key, raw, "one of {" + joined + "}");
    return def;
  }

  // Call after reading every supported key.
  void Done() const {
    for (const auto& [key, value] : given_) {
      if (!seen_.count(key)) {
        Fail(ErrorCode::kUsage, "zoo entry '" + entry_ +
                                    "': unknown parameter '" + key + "'");
      }
    }
  }

 private:
  std::string Raw(const std::string& key, std::string def) {
    seen_.insert(key);
    auto it = given_.find(key);
    return it == given_.end() ? def : it->second;
  }

  [[noreturn]] void BadValue(const std::string& key, const std::string& raw,
                             const std::string& want) const {
    Fail(ErrorCode::kUsage, "zoo entry '" + entry_ + "': parameter '" + key +
                                "' = '" + raw + "', expected " + want);
  }

  std::string entry_;
  const ZooParams& given_;
  std::set<std::string> seen_;
};

std::string N(const std::string& prefix, int i) {
  return prefix + "_" + std::to_string(i);
}

// Deterministic CPT: one-hot rows picked by `fn` over parent digits.
std::vector<std::vector<double>> Det(
    const std::vector<int>& parent_sizes, int arity,
    const std::function<int(const std::vector<int>&)>& fn) {
  ConfigIndexer idx(parent_sizes);
  std::vector<std::vector<double>> rows;
  rows.reserve(static_cast<size_t>(idx.count()));
  for (std::int64_t c = 0; c < idx.count(); ++c) {
    std::vector<double> row(static_cast<size_t>(arity), 0.0);
    row[static_cast<size_t>(fn(idx.DigitsOf(c)))] = 1.0;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<double> Vals(
    const std::vector<int>& parent_sizes,
    const std::function<double(const std::vector<int>&)>& fn) {
  ConfigIndexer idx(parent_sizes);
  std::vector<double> values;
  values.reserve(static_cast<size_t>(idx.count()));
  for (std::int64_t c = 0; c < idx.count(); ++c) {
    values.push_back(fn(idx.DigitsOf(c)));
  }
  return values;
}

// Binary rows from P(first outcome) per parent configuration.
std::vector<std::vector<double>> Bern(const std::vector<double>& p0) {
  std::vector<std::vector<double>> rows;
  rows.reserve(p0.size());
  for (double p : p0) rows.push_back({p, 1.0 - p});
  return rows;
}

const std::vector<std::string> kSDom{"s0", "s1"};
const std::vector<std::string> kADom{"a0", "a1"};

// Shared two-state transition: P(s0' | s, a), rows over (s, a).
const std::vector<double> kStepP0{0.9, 0.3, 0.6, 0.2};
// Variant used by rl_mdp's figure walkthrough.
const std::vector<double> kMdpStepP0{0.9, 0.2, 0.5, 0.1};
// Theta-conditioned transition: t1 swaps the action effects.
std::vector<std::vector<double>> ThetaStepRows() {
  return Bern({0.9, 0.3, 0.6, 0.2, 0.3, 0.9, 0.2, 0.6});
}

CidModel BuildRlMdp(const ZooParams& given) {
  Params p("rl_mdp", given);
  int h = p.Int("horizon", 3, 1, 4);
  p.Done();
  CidModelBuilder b;
  b.AddAgent("agent");
  for (int i = 1; i <= h; ++i) {
    if (i == 1) {
      b.AddChance("S_1", kSDom, {}, /*world=*/true);
      b.SetCpt("S_1", {{0.6, 0.4}});
    } else {
      b.AddChance(N("S", i), kSDom, {N("S", i - 1), N("A", i - 1)}, true);
      b.SetCpt(N("S", i), Bern(kMdpStepP0));
    }
    if (i < h) b.AddDecision(N("A", i), "agent", kADom, {N("S", i)});
    b.AddUtility(N("R", i), "agent", {N("S", i)});
    b.SetUtility(N("R", i), {1.0, 0.0});
  }
  return b.Build();
}

CidModel BuildRlUnknownMdp(const ZooParams& given) {
  Params p("rl_unknown_mdp", given);
  int h = p.Int("horizon", 2, 1, 4);
  p.Done();
  CidModelBuilder b;
  b.AddAgent("agent");
  b.AddChance("Theta_T", {"t0", "t1"}, {});
  b.SetCpt("Theta_T", {{0.5, 0.5}});
  b.AddChance("Theta_R", {"r0", "r1"}, {});
  b.SetCpt("Theta_R", {{0.5, 0.5}});
  std::vector<std::string> seen;  // chronological observations
  for (int i = 1; i <= h; ++i) {
    if (i == 1) {
      b.AddChance("S_1", kSDom, {"Theta_T"}, true);
      b.SetCpt("S_1", Bern({0.8, 0.3}));
    } else {
      b.AddChance(N("S", i), kSDom, {"Theta_T", N("S", i - 1), N("A", i - 1)},
                  true);
      b.SetCpt(N("S", i), ThetaStepRows());
    }
    seen.push_back(N("S", i));
    seen.push_back(N("R", i));
    if (i < h) {
      b.AddDecision(N("A", i), "agent", kADom, seen);
      seen.push_back(N("A", i));
    }
    b.AddUtility(N("R", i), "agent", {"Theta_R", N("S", i)});
    b.SetUtility(N("R", i), {1.0, 0.0, 0.5, 0.0});
  }
  return b.Build();
}

CidModel BuildRlPomdp(const ZooParams& given) {
  Params p("rl_pomdp", given);
  int h = p.Int("horizon", 2, 1, 4);
  bool fold = p.Flag("fold_params", true);
  p.Done();
  CidModelBuilder b;
  b.AddAgent("agent");
  if (!fold) {
    b.AddChance("Theta_T", {"t0", "t1"}, {});
    b.SetCpt("Theta_T", {{0.5, 0.5}});
    b.AddChance("Theta_R", {"r0", "r1"}, {});
    b.SetCpt("Theta_R", {{0.5, 0.5}});
  }
  std::vector<std::string> seen;
  for (int i = 1; i <= h; ++i) {
    if (i == 1) {
      if (fold) {
        b.AddChance("S_1", kSDom, {}, true);
        b.SetCpt("S_1", {{0.5, 0.5}});
      } else {
        b.AddChance("S_1", kSDom, {"Theta_T"}, true);
        b.SetCpt("S_1", Bern({0.8, 0.3}));
      }
    } else if (fold) {
      b.AddChance(N("S", i), kSDom, {N("S", i - 1), N("A", i - 1)}, true);
      b.SetCpt(N("S", i), Bern(kStepP0));
    } else {
      b.AddChance(N("S", i), kSDom, {"Theta_T", N("S", i - 1), N("A", i - 1)},
                  true);
      b.SetCpt(N("S", i), ThetaStepRows());
    }
    if (i < h) {
      b.AddChance(N("O", i), {"o0", "o1"}, {N("S", i)});
      b.SetCpt(N("O", i), Bern({0.8, 0.2}));
      seen.push_back(N("O", i));
      seen.push_back(N("R", i));
      b.AddDecision(N("A", i), "agent", kADom, seen);
      seen.push_back(N("A", i));
    }
    if (fold) {
      b.AddUtility(N("R", i), "agent", {N("S", i)});
      b.SetUtility(N("R", i), {1.0, 0.0});
    } else {
      b.AddUtility(N("R", i), "agent", {"Theta_R", N("S", i)});
      b.SetUtility(N("R", i), {1.0, 0.0, 0.5, 0.0});
    }
  }
  return b.Build();
}

// Shared body of modifiable_rf and current_rf; they differ only in which
// reward-function node each R_i reads.
CidModel BuildRfFamily(const std::string& entry, const ZooParams& given,
                       bool current) {
  Params p(entry, given);
  int h = p.Int("horizon", 3, 1, 4);
  bool noop = p.Flag("tamper_noop", false);
  p.Done();
  const std::vector<std::string> sdom{"clean", "dirty"};
  const std::vector<std::string> fdom{"true", "hacked"};
  const std::vector<std::string> adom{"work", "tamper"};
  CidModelBuilder b;
  b.AddAgent("agent");
  for (int i = 1; i <= h; ++i) {
    if (i == 1) {
      b.AddChance("S_1", sdom, {}, true);
      b.SetCpt("S_1", {{1.0, 0.0}});
      b.AddChance("RF_1", fdom, {});
      b.SetCpt("RF_1", {{1.0, 0.0}});
    } else {
      // digits: (S, RF, A) with clean/true/work = 0; staying clean needs a
      // clean state and (unless tampering is inert) the work action
      b.AddChance(N("S", i), sdom,
                  {N("S", i - 1), N("RF", i - 1), N("A", i - 1)}, true);
      std::vector<std::vector<double>> rows;
      ConfigIndexer idx({2, 2, 2});
      for (std::int64_t c = 0; c < idx.count(); ++c) {
        std::vector<int> d = idx.DigitsOf(c);
        bool eff = noop ? d[0] == 0 : (d[0] == 0 && d[2] == 0);
        rows.push_back({eff ? 0.9 : 0.0, eff ? 0.1 : 1.0});
      }
      b.SetCpt(N("S", i), rows);
      // digits: (RF, S, A)
      b.AddChance(N("RF", i), fdom,
                  {N("RF", i - 1), N("S", i - 1), N("A", i - 1)});
      b.SetCpt(N("RF", i), Det({2, 2, 2}, 2, [noop](const std::vector<int>& d) {
                 if (noop) return d[0];
                 return (d[0] == 1 || d[2] == 1) ? 1 : 0;
               }));
    }
    if (i < h) {
      b.AddDecision(N("A", i), "agent", adom, {N("S", i), N("RF", i)});
    }
    std::string rf = current ? "RF_1" : N("RF", i);
    b.AddUtility(N("R", i), "agent", {N("S", i), rf});
    // (S, RF): hacked pays 1 regardless; true pays 1 only on clean.
    b.SetUtility(N("R", i), {1.0, 1.0, 0.0, 1.0});
  }
  return b.Build();
}

CidModel BuildRewardModeling(const ZooParams& given) {
  Params p("reward_modeling", given);
  int h = p.Int("horizon", 2, 1, 4);
  bool theta_t = p.Flag("add_theta_t", false);
  p.Done();
  CidModelBuilder b;
  b.AddAgent("agent");
  b.AddChance("Theta_H", {"t0", "t1"}, {});
  b.SetCpt("Theta_H", {{0.5, 0.5}});
  if (theta_t) {
    b.AddChance("Theta_T", {"t0", "t1"}, {});
    b.SetCpt("Theta_T", {{0.5, 0.5}});
  }
  std::vector<std::string> seen;
  for (int i = 1; i <= h; ++i) {
    if (i == 1) {
      if (theta_t) {
        b.AddChance("S_1", kSDom, {"Theta_T"}, true);
        b.SetCpt("S_1", Bern({0.8, 0.3}));
      } else {
        b.AddChance("S_1", kSDom, {}, true);
        b.SetCpt("S_1", {{0.5, 0.5}});
      }
    } else if (theta_t) {
      b.AddChance(N("S", i), kSDom, {"Theta_T", N("S", i - 1), N("A", i - 1)},
                  true);
      b.SetCpt(N("S", i), ThetaStepRows());
    } else {
      b.AddChance(N("S", i), kSDom, {N("S", i - 1), N("A", i - 1)}, true);
      b.SetCpt(N("S", i), Bern(kStepP0));
    }
    seen.push_back(N("S", i));
    seen.push_back(N("R", i));
    if (i < h) {
      b.AddDecision(N("A", i), "agent", kADom, seen);
      seen.push_back(N("A", i));
    }
    if (i == 1) {
      b.AddUtility("R_1", "agent", {"S_1"});
      b.SetUtility("R_1", {1.0, 0.0});
    } else {
      // 0.5 for human approval (D = d1) plus 0.5 for the good state.
      b.AddUtility(N("R", i), "agent", {N("D", i - 1), N("S", i)});
      b.SetUtility(N("R", i), {0.5, 0.0, 1.0, 0.5});
    }
    if (i < h) {
      // d1 iff the action matches the human's preference.
      b.AddChance(N("D", i), {"d0", "d1"},
                  {N("S", i), N("A", i), "Theta_H"});
      b.SetCpt(N("D", i), Det({2, 2, 2}, 2, [](const std::vector<int>& d) {
                 return d[1] == d[2] ? 1 : 0;
               }));
    }
  }
  return b.Build();
}

CidModel BuildCirl(const ZooParams& given) {
  Params p("cirl", given);
  int h = p.Int("horizon", 3, 1, 4);
  bool team = p.Flag("team", false);
  p.Done();
  std::string human = team ? "team" : "human";
  std::string robot = team ? "team" : "agent";
  CidModelBuilder b;
  if (team) {
    b.AddAgent("team");
  } else {
    b.AddAgent("human");
    b.AddAgent("agent");
  }
  b.AddChance("Theta_H", {"t0", "t1"}, {});
  b.SetCpt("Theta_H", {{0.5, 0.5}});
  std::vector<std::string> seen;
  for (int i = 1; i <= h; ++i) {
    if (i == 1) {
      b.AddChance("S_1", kSDom, {}, true);
      b.SetCpt("S_1", {{0.5, 0.5}});
    } else {
      // digits: (S, A_H, A); matching actions keep the good state likely
      b.AddChance(N("S", i), kSDom,
                  {N("S", i - 1), N("A_H", i - 1), N("A", i - 1)}, true);
      ConfigIndexer idx({2, 2, 2});
      std::vector<std::vector<double>> rows;
      for (std::int64_t c = 0; c < idx.count(); ++c) {
        std::vector<int> d = idx.DigitsOf(c);
        double good = d[1] == d[2] ? (d[0] == 0 ? 0.9 : 0.7)
                                   : (d[0] == 0 ? 0.3 : 0.1);
        rows.push_back({good, 1.0 - good});
      }
      b.SetCpt(N("S", i), rows);
    }
    seen.push_back(N("S", i));
    if (i < h) {
      std::vector<std::string> hobs = seen;
      hobs.push_back("Theta_H");
      b.AddDecision(N("A_H", i), human, kADom, hobs);
      seen.push_back(N("A_H", i));
      b.AddDecision(N("A", i), robot, kADom, seen);
      seen.push_back(N("A", i));
    }
    b.AddUtility(N("R", i), human, {"Theta_H", N("S", i)});
    b.SetUtility(N("R", i), {1.0, 0.0, 0.0, 1.0});
  }
  return b.Build();
}

// Question answering family. Answers include a reserved "hidden" outcome so
// the counterfactual-oracle intervention has a designated default.
const std::vector<std::string> kQDom{"q0", "q1"};
const std::vector<std::string> kAnsDom{"a0", "a1", "hidden"};

// P(s0 | answer): answering a0 makes s0 likely, a1 makes s1 likely, hidden
// leaves the prior-ish middle ground.
std::vector<std::vector<double>> StateRows() {
  return Bern({0.9, 0.4, 0.65});
}

// 1 iff the answer names the state (a0~s0, a1~s1); hidden never matches.
// Parent digits: (Question, Answer, State-like).
std::vector<double> MatchStateReward() {
  return Vals({2, 3, 2}, [](const std::vector<int>& d) {
    return d[1] == d[2] ? 1.0 : 0.0;
  });
}

CidModel BuildSupervisedLearning(const ZooParams& given) {
  Params p("supervised_learning", given);
  p.Done();
  CidModelBuilder b;
  b.AddAgent("system");
  b.AddChance("Question", kQDom, {});
  b.SetCpt("Question", {{0.5, 0.5}});
  b.AddDecision("Answer", "system", kAnsDom, {"Question"});
  b.AddChance("State", kSDom, {"Answer"}, true);
  b.SetCpt("State", StateRows());
  b.AddUtility("Reward", "system", {"Question", "Answer"});
  // 1 iff the answer matches the question's designated label.
  b.SetUtility("Reward", Vals({2, 3}, [](const std::vector<int>& d) {
                 return d[0] == d[1] ? 1.0 : 0.0;
               }));
  return b.Build();
}

CidModel BuildSelfFulfilling(const ZooParams& given) {
  Params p("self_fulfilling", given);
  p.Done();
  CidModelBuilder b;
  b.AddAgent("system");
  b.AddChance("Question", kQDom, {});
  b.SetCpt("Question", {{0.5, 0.5}});
  b.AddDecision("Answer", "system", kAnsDom, {"Question"});
  b.AddChance("State", kSDom, {"Answer"}, true);
  b.SetCpt("State", StateRows());
  b.AddUtility("Reward", "system", {"Question", "Answer", "State"});
  b.SetUtility("Reward", MatchStateReward());
  return b.Build();
}

CidModel BuildCounterfactualOracle(const ZooParams& given) {
  Params p("counterfactual_oracle", given);
  p.Done();
  CidModelBuilder b;
  b.AddAgent("system");
  b.AddChance("Question", kQDom, {});
  b.SetCpt("Question", {{0.5, 0.5}});
  b.AddDecision("Answer", "system", kAnsDom, {"Question"});
  b.AddChance("State", kSDom, {"Answer"}, true);
  b.SetCpt("State", StateRows());
  // The counterfactual answer is pinned at "hidden": the no-one-reads world.
  b.AddChance("Answer_cf", kAnsDom, {"Question"});
  b.SetCpt("Answer_cf", {{0.0, 0.0, 1.0}, {0.0, 0.0, 1.0}});
  b.AddChance("State_cf", kSDom, {"Answer_cf"}, true);
  b.SetCpt("State_cf", StateRows());
  b.AddUtility("Reward", "system", {"Question", "Answer", "State_cf"});
  b.SetUtility("Reward", MatchStateReward());
  return b.Build();
}

CidModel BuildDebate(const ZooParams& given, bool blind) {
  Params p(blind ? "debate_blind" : "debate", given);
  int rounds = blind ? p.Int("rounds", 1, 1, 1) : p.Int("rounds", 2, 1, 4);
  std::string judge =
      blind ? "match" : p.Choice("judge", "final", {"final", "constant1"});
  p.Done();
  CidModelBuilder b;
  b.AddAgent("system1");
  b.AddAgent("system2");
  b.AddChance("Q", kQDom, {});
  b.SetCpt("Q", {{0.5, 0.5}});
  std::vector<std::string> statements;
  for (int r = 1; r <= rounds; ++r) {
    for (int k = 1; k <= 2; ++k) {
      std::string name = "A_" + std::to_string(r) + "_" + std::to_string(k);
      std::vector<std::string> obs{"Q"};
      if (!blind) {
        obs.insert(obs.end(), statements.begin(), statements.end());
      }
      b.AddDecision(name, k == 1 ? "system1" : "system2", kSDom, obs);
      statements.push_back(name);
    }
  }
  std::vector<std::string> jparents{"Q"};
  jparents.insert(jparents.end(), statements.begin(), statements.end());
  std::vector<int> sizes(jparents.size(), 2);
  if (blind) {
    // Matching pennies on the parity chosen by Q: system1 wants the
    // statements to agree on q0 and to differ on q1.
    b.AddChance("J", {"j1", "j2"}, jparents);
    b.SetCpt("J", Det(sizes, 2, [](const std::vector<int>& d) {
               return (d[1] == d[2]) == (d[0] == 0) ? 0 : 1;
             }));
    b.AddUtility("R_1", "system1", {"J"});
    b.SetUtility("R_1", {1.0, 0.0});
    b.AddUtility("R_2", "system2", {"J"});
    b.SetUtility("R_2", {0.0, 1.0});
    return b.Build();
  }
  int final1 = static_cast<int>(jparents.size()) - 2;  // A_<rounds>_1
  int final2 = final1 + 1;
  b.AddChance("J", {"j1", "j2", "draw"}, jparents);
  if (judge == "constant1") {
    b.SetCpt("J", Det(sizes, 3, [](const std::vector<int>&) { return 0; }));
  } else {
    // The judge sides with whichever system's final statement matches Q's
    // designated answer (s_i answers q_i); both or neither is a draw.
    b.SetCpt("J", Det(sizes, 3, [final1, final2](const std::vector<int>& d) {
               bool m1 = d[final1] == d[0];
               bool m2 = d[final2] == d[0];
               if (m1 && !m2) return 0;
               if (m2 && !m1) return 1;
               return 2;
             }));
  }
  b.AddUtility("R_1", "system1", {"J"});
  b.SetUtility("R_1", {1.0, 0.0, 0.5});
  b.AddUtility("R_2", "system2", {"J"});
  b.SetUtility("R_2", {0.0, 1.0, 0.5});
  return b.Build();
}

CidModel BuildIda(const ZooParams& given) {
  Params p("ida", given);
  p.Done();
  CidModelBuilder b;
  b.AddAgent("system");
  b.AddChance("Q", kQDom, {});
  b.SetCpt("Q", {{0.5, 0.5}});
  b.AddChance("Q_1", kQDom, {"Q"});
  b.SetCpt("Q_1", Det({2}, 2, [](const std::vector<int>& d) { return d[0]; }));
  b.AddChance("Q_2", kQDom, {"Q"});
  b.SetCpt("Q_2",
           Det({2}, 2, [](const std::vector<int>& d) { return 1 - d[0]; }));
  b.AddChance("A_1", kADom, {"Q_1"});
  b.SetCpt("A_1", Bern({0.8, 0.2}));
  b.AddChance("A_2", kADom, {"Q_2"});
  b.SetCpt("A_2", Bern({0.8, 0.2}));
  // Subanswers are normalized against the posed question (a flipped
  // subquestion flips its answer back); agreement wins, ties default to a0.
  b.AddChance("A_hat", kADom, {"Q", "Q_1", "Q_2", "A_1", "A_2"});
  b.SetCpt("A_hat", Det({2, 2, 2, 2, 2}, 2, [](const std::vector<int>& d) {
             int est1 = d[1] == d[0] ? d[3] : 1 - d[3];
             int est2 = d[2] == d[0] ? d[4] : 1 - d[4];
             return est1 == est2 ? est1 : 0;
           }));
  b.AddDecision("A", "system", kADom, {"Q"});
  b.AddUtility("R", "system", {"A_hat", "A"});
  b.SetUtility("R", {1.0, 0.0, 0.0, 1.0});
  return b.Build();
}

CidModel BuildCais(const ZooParams& given) {
  Params p("cais", given);
  p.Done();
  CidModelBuilder b;
  for (int k = 1; k <= 4; ++k) b.AddAgent("service" + std::to_string(k));
  b.AddChance("Input", {"i0", "i1"}, {});
  b.SetCpt("Input", {{0.5, 0.5}});
  auto match = std::vector<double>{1.0, 0.0, 0.0, 1.0};
  b.AddDecision("A_1", "service1", kADom, {"Input"});
  b.AddUtility("R_1", "service1", {"Input", "A_1"});
  b.SetUtility("R_1", match);
  b.AddDecision("A_2", "service2", kADom, {"Input"});
  b.AddUtility("R_2", "service2", {"Input", "A_2"});
  b.SetUtility("R_2", match);
  b.AddDecision("A_3", "service3", kADom, {"A_1"});
  b.AddUtility("R_3", "service3", {"A_1", "A_3"});
  b.SetUtility("R_3", match);
  b.AddDecision("A_4", "service4", kADom, {"A_2"});
  b.AddUtility("R_4", "service4", {"A_2", "A_4"});
  b.SetUtility("R_4", match);
  b.AddChance("Output", {"o0", "o1"}, {"A_3", "A_4"});
  b.SetCpt("Output", Det({2, 2}, 2, [](const std::vector<int>& d) {
             return d[0] == 1 && d[1] == 1 ? 1 : 0;
           }));
  return b.Build();
}

}  // namespace

const std::vector<ZooEntryInfo>& ZooList() {
  static const std::vector<ZooEntryInfo> entries = [] {
    std::vector<ZooEntryInfo> out;
    for (const std::string& name : EntryNames()) {
      json doc = json::parse(ZooManifest(name));
      ZooEntryInfo info;
      info.name = name;
      info.title = doc.at("title").get<std::string>();
      for (auto it = doc.at("params").begin(); it != doc.at("params").end();
           ++it) {
        const json& v = it.value();
        info.defaults[it.key()] =
            v.is_string() ? v.get<std::string>() : v.dump();
      }
      out.push_back(std::move(info));
    }
    return out;
  }();
  return entries;
}

const std::string& ZooManifest(const std::string& name) {
  static const std::map<std::string, std::string> texts = [] {
    std::map<std::string, std::string> out;
    for (const std::string& entry : EntryNames()) {
      out[entry] = ManifestText(entry);
    }
    return out;
  }();
  auto it = texts.find(name);
  if (it == texts.end()) {
    Fail(ErrorCode::kUsage, "unknown zoo entry '" + name + "'");
  }
  return it->second;
}

CidModel ZooBuild(const std::string& name, const ZooParams& params) {
  CidModel model = [&] {
    if (name == "rl_mdp") return BuildRlMdp(params);
    if (name == "rl_unknown_mdp") return BuildRlUnknownMdp(params);
    if (name == "rl_pomdp") return BuildRlPomdp(params);
    if (name == "modifiable_rf") return BuildRfFamily(name, params, false);
    if (name == "current_rf") return BuildRfFamily(name, params, true);
    if (name == "reward_modeling") return BuildRewardModeling(params);
    if (name == "cirl") return BuildCirl(params);
    if (name == "supervised_learning") return BuildSupervisedLearning(params);
    if (name == "self_fulfilling") return BuildSelfFulfilling(params);
    if (name == "counterfactual_oracle")
      return BuildCounterfactualOracle(params);
    if (name == "debate") return BuildDebate(params, false);
    if (name == "debate_blind") return BuildDebate(params, true);
    if (name == "ida") return BuildIda(params);
    if (name == "cais") return BuildCais(params);
    Fail(ErrorCode::kUsage, "unknown zoo entry '" + name + "'");
  }();
  model.RequireValid();
  return model;
}

WireheadingReport WireheadingExperiment(const ZooParams& params) {
  Params p("wireheading_experiment", params);
  int h = p.Int("horizon", 3, 2, 4);
  bool noop = p.Flag("tamper_noop", false);
  p.Done();
  ZooParams sub{{"horizon", std::to_string(h)},
                {"tamper_noop", noop ? "1" : "0"}};
  WireheadingReport report;
  report.params = sub;
  for (bool current : {false, true}) {
    CidModel model = ZooBuild(current ? "current_rf" : "modifiable_rf", sub);
    SolveResult res =
        SolveSingleAgent(model, "agent", SolveMethod::kExhaustive);
    WireheadingArm arm;
    arm.value = res.value.at("agent");
    arm.policy = res.profile;
    const DecisionRule& rule = res.profile.rules.at("A_1");
    const Node& a1 = model.node(model.RequireNode("A_1"));
    // Row 0 is the start configuration (clean, true).
    int best = 0;
    for (int o = 1; o < static_cast<int>(a1.outcomes.size()); ++o) {
      if (rule.rows[0][o] > rule.rows[0][best]) best = o;
    }
    arm.first_action = a1.outcomes[best];
    arm.tampers = arm.first_action == "tamper";
    (current ? report.current : report.modifiable) = std::move(arm);
  }
  return report;
}

}  // namespace cid
