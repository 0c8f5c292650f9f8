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

#include <cmath>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#include "cid/incentives.hpp"
#include "cid/inference.hpp"
#include "cid/model.hpp"
#include "cid/solve.hpp"
#include "cid/zoo.hpp"

namespace cid {
namespace {

using nlohmann::json;

json LoadManifestFile(const std::string& name) {
  std::string path = std::string(CID_DATA_DIR) + "/zoo/" + name + ".manifest.json";
  std::ifstream in(path);
  REQUIRE_MESSAGE(in.good(), "cannot open " << path);
  json doc;
  in >> doc;
  return doc;
}

std::vector<std::string> StringList(const json& arr) {
  std::vector<std::string> out;
  for (const json& v : arr) out.push_back(v.get<std::string>());
  return out;
}

std::vector<std::string> ParentNamesOf(const CidModel& model,
                                       const std::string& name) {
  const Node& node = model.node(model.RequireNode(name));
  std::vector<std::string> out;
  for (int p : node.parents) out.push_back(model.node(p).name);
  return out;
}

// The manifest's node and edge lists must describe the built graph exactly.
void CheckGraphMatches(const CidModel& model, const json& doc) {
  CHECK(model.agents() == StringList(doc.at("agents")));

  REQUIRE(model.num_nodes() == static_cast<int>(doc.at("nodes").size()));
  for (const json& spec : doc.at("nodes")) {
    std::string name = spec.at("name").get<std::string>();
    CAPTURE(name);
    int i = model.IndexOf(name);
    REQUIRE(i >= 0);
    const Node& node = model.node(i);
    CHECK(KindName(node.kind) == spec.at("kind").get<std::string>());
    std::string agent =
        spec.contains("agent") ? spec.at("agent").get<std::string>() : "";
    CHECK(node.agent == agent);
    bool world = spec.contains("world") && spec.at("world").get<bool>();
    CHECK(node.world == world);
    if (node.kind == NodeKind::kChance) CHECK(model.cpt(i) != nullptr);
    if (node.kind == NodeKind::kUtility) CHECK(model.utility(i) != nullptr);
  }

  std::set<std::string> want;
  for (const json& edge : doc.at("edges")) {
    want.insert(edge.at(0).get<std::string>() + " -> " +
                edge.at(1).get<std::string>() + " [" +
                edge.at(2).get<std::string>() + "]");
  }
  std::set<std::string> got;
  for (int i = 0; i < model.num_nodes(); ++i) {
    const char* kind =
        model.node(i).kind == NodeKind::kDecision ? "information" : "causal";
    for (int p : model.node(i).parents) {
      got.insert(model.node(p).name + " -> " + model.node(i).name + " [" +
                 kind + "]");
    }
  }
  CHECK(got == want);
}

void CheckAssertion(const CidModel& model, const json& a) {
  std::string type = a.at("type").get<std::string>();
  if (type == "sufficient_recall") {
    RecallCertificate cert =
        CheckSufficientRecall(model, a.at("agent").get<std::string>());
    CHECK(cert.ok == a.at("expect").get<bool>());
  } else if (type == "ability") {
    IncentiveFinding f = AbilityToInfluence(model,
                                            a.at("decision").get<std::string>(),
                                            a.at("subject").get<std::string>());
    CHECK(f.present == a.at("expect").get<bool>());
    if (f.present) {
      CHECK(f.witness.front() == a.at("decision").get<std::string>());
      CHECK(f.witness.back() == a.at("subject").get<std::string>());
    }
  } else if (type == "control") {
    IncentiveFinding f = ControlIncentive(model,
                                          a.at("decision").get<std::string>(),
                                          a.at("subject").get<std::string>());
    CHECK(f.present == a.at("expect").get<bool>());
  } else if (type == "requisite") {
    IncentiveFinding f =
        RequisiteObservation(model, a.at("decision").get<std::string>(),
                             a.at("observation").get<std::string>());
    CHECK(f.present == a.at("expect").get<bool>());
  } else if (type == "dsep") {
    bool separated = DSeparated(model, StringList(a.at("x")),
                                StringList(a.at("y")), StringList(a.at("given")));
    CHECK(separated == a.at("expect").get<bool>());
  } else if (type == "mediates") {
    bool mediated = Mediates(model, a.at("from").get<std::string>(),
                             a.at("to").get<std::string>(),
                             StringList(a.at("via")));
    CHECK(mediated == a.at("expect").get<bool>());
  } else if (type == "diagnostic_flags") {
    DiagnosticReport report =
        SelfFulfillingDiagnostic(model, a.at("decision").get<std::string>());
    std::vector<std::string> subjects;
    for (const DiagnosticFlag& flag : report.flagged) {
      subjects.push_back(flag.subject);
      CHECK(flag.ability.present);
      CHECK(flag.control.present);
    }
    CHECK(subjects == StringList(a.at("expect")));
  } else if (type == "utility_parents") {
    CHECK(ParentNamesOf(model, a.at("utility").get<std::string>()) ==
          StringList(a.at("parents")));
  } else {
    FAIL("unhandled assertion type '" << type << "'");
  }
}

TEST_CASE("zoo catalog order, titles, and defaults come from the manifests") {
  const std::vector<std::string> expected{
      "rl_mdp",         "rl_unknown_mdp",  "rl_pomdp",
      "modifiable_rf",  "current_rf",      "reward_modeling",
      "cirl",           "supervised_learning", "self_fulfilling",
      "counterfactual_oracle", "debate",   "debate_blind",
      "ida",            "cais"};
  const std::vector<ZooEntryInfo>& list = ZooList();
  REQUIRE(list.size() == expected.size());
  for (size_t i = 0; i < list.size(); ++i) {
    CAPTURE(expected[i]);
    CHECK(list[i].name == expected[i]);
    json doc = LoadManifestFile(expected[i]);
    CHECK(list[i].title == doc.at("title").get<std::string>());
    // Embedded text mirrors the data file byte for byte at the JSON level.
    CHECK(json::parse(ZooManifest(expected[i])) == doc);
    ZooParams defaults;
    for (auto it = doc.at("params").begin(); it != doc.at("params").end();
         ++it) {
      defaults[it.key()] = it.value().is_string()
                               ? it.value().get<std::string>()
                               : it.value().dump();
    }
    CHECK(list[i].defaults == defaults);
  }

  CHECK_THROWS_WITH_AS(ZooManifest("frontier"), "unknown zoo entry 'frontier'",
                       CidError);
  CHECK_THROWS_WITH_AS(ZooBuild("frontier"), "unknown zoo entry 'frontier'",
                       CidError);
  try {
    ZooBuild("frontier");
    FAIL("unreachable");
  } catch (const CidError& e) {
    CHECK(e.code() == ErrorCode::kUsage);
  }
}

TEST_CASE("every zoo entry builds a valid model matching its manifest") {
  for (const ZooEntryInfo& info : ZooList()) {
    CAPTURE(info.name);
    json doc = LoadManifestFile(info.name);
    CidModel model = ZooBuild(info.name);
    CHECK(model.Validation().ok);
    CHECK(model.Validation().violations.empty());
    CheckGraphMatches(model, doc);
    for (const json& a : doc.at("assertions")) {
      std::string described = a.dump();
      CAPTURE(described);
      CheckAssertion(model, a);
    }
  }
}

TEST_CASE("zoo horizon parameter stretches and shrinks the chain") {
  CidModel h4 = ZooBuild("rl_mdp", {{"horizon", "4"}});
  CHECK(h4.num_nodes() == 11);  // S_1..4, A_1..3, R_1..4
  CHECK(h4.IndexOf("S_4") >= 0);
  CHECK(h4.IndexOf("A_3") >= 0);
  CHECK(h4.IndexOf("A_4") == -1);
  CHECK(ParentNamesOf(h4, "S_4") == std::vector<std::string>{"S_3", "A_3"});

  CidModel h1 = ZooBuild("rl_mdp", {{"horizon", "1"}});
  CHECK(h1.num_nodes() == 2);  // S_1 and R_1; no decision fits before the end
  CHECK(h1.DecisionsOf("agent").empty());
  CHECK(h1.Validation().ok);
}

TEST_CASE("zoo parameters are validated with exact diagnostics") {
  CHECK_THROWS_WITH_AS(
      ZooBuild("rl_mdp", {{"horizon", "5"}}),
      "zoo entry 'rl_mdp': parameter 'horizon' must be between 1 and 4",
      CidError);
  CHECK_THROWS_WITH_AS(
      ZooBuild("rl_mdp", {{"horizon", "three"}}),
      "zoo entry 'rl_mdp': parameter 'horizon' = 'three', expected an integer",
      CidError);
  CHECK_THROWS_WITH_AS(
      ZooBuild("rl_mdp", {{"horizon", "3x"}}),
      "zoo entry 'rl_mdp': parameter 'horizon' = '3x', expected an integer",
      CidError);
  CHECK_THROWS_WITH_AS(ZooBuild("rl_mdp", {{"flavor", "hot"}}),
                       "zoo entry 'rl_mdp': unknown parameter 'flavor'",
                       CidError);
  CHECK_THROWS_WITH_AS(
      ZooBuild("rl_pomdp", {{"fold_params", "maybe"}}),
      "zoo entry 'rl_pomdp': parameter 'fold_params' = 'maybe', expected a "
      "flag (0/1/true/false)",
      CidError);
  CHECK_THROWS_WITH_AS(
      ZooBuild("debate", {{"judge", "strict"}}),
      "zoo entry 'debate': parameter 'judge' = 'strict', expected one of "
      "{final, constant1}",
      CidError);
  CHECK_THROWS_WITH_AS(
      ZooBuild("debate_blind", {{"rounds", "2"}}),
      "zoo entry 'debate_blind': parameter 'rounds' must be between 1 and 1",
      CidError);
  try {
    ZooBuild("rl_mdp", {{"horizon", "0"}});
    FAIL("unreachable");
  } catch (const CidError& e) {
    CHECK(e.code() == ErrorCode::kUsage);
  }

  // Flags accept both numeric and named spellings.
  CHECK_NOTHROW(ZooBuild("modifiable_rf", {{"tamper_noop", "true"}}));
  CHECK_NOTHROW(ZooBuild("modifiable_rf", {{"tamper_noop", "0"}}));
  CHECK_NOTHROW(ZooBuild("rl_pomdp", {{"fold_params", "false"}}));
}

TEST_CASE("zoo variants rewire structure as documented") {
  SUBCASE("rl_pomdp hides the state and optionally unfolds the parameters") {
    CidModel folded = ZooBuild("rl_pomdp");
    CHECK(folded.IndexOf("Theta_T") == -1);
    CHECK(folded.IndexOf("Theta_R") == -1);
    // The decision sees the observation and reward, never the state.
    CHECK(ParentNamesOf(folded, "A_1") ==
          std::vector<std::string>{"O_1", "R_1"});
    CHECK_FALSE(folded.HasEdge(folded.RequireNode("S_1"),
                               folded.RequireNode("A_1")));

    CidModel unfolded = ZooBuild("rl_pomdp", {{"fold_params", "0"}});
    CHECK(unfolded.IndexOf("Theta_T") >= 0);
    CHECK(unfolded.IndexOf("Theta_R") >= 0);
    CHECK(ParentNamesOf(unfolded, "S_2") ==
          std::vector<std::string>{"Theta_T", "S_1", "A_1"});
    CHECK(ParentNamesOf(unfolded, "R_1") ==
          std::vector<std::string>{"Theta_R", "S_1"});
  }

  SUBCASE("reward_modeling gains a transition parameter on request") {
    CidModel plain = ZooBuild("reward_modeling");
    CHECK(plain.IndexOf("Theta_T") == -1);
    CHECK(ParentNamesOf(plain, "R_2") ==
          std::vector<std::string>{"D_1", "S_2"});
    CidModel with = ZooBuild("reward_modeling", {{"add_theta_t", "1"}});
    CHECK(with.IndexOf("Theta_T") >= 0);
    CHECK(ParentNamesOf(with, "S_1") == std::vector<std::string>{"Theta_T"});
  }

  SUBCASE("cirl team mode merges both owners") {
    CidModel split = ZooBuild("cirl");
    CHECK(split.agents() == std::vector<std::string>{"human", "agent"});
    CHECK(split.node(split.RequireNode("A_H_1")).agent == "human");
    CHECK(split.node(split.RequireNode("A_1")).agent == "agent");
    CHECK(split.node(split.RequireNode("R_1")).agent == "human");

    CidModel team = ZooBuild("cirl", {{"team", "1"}});
    CHECK(team.agents() == std::vector<std::string>{"team"});
    CHECK(team.DecisionsOf("team").size() == 4);
    CHECK(team.UtilitiesOf("team").size() == 3);
    // Same graph either way; only ownership moves.
    CHECK(team.num_nodes() == split.num_nodes());
  }

  SUBCASE("debate grows two statements per round and the judge watches all") {
    CidModel one = ZooBuild("debate", {{"rounds", "1"}});
    CHECK(one.num_nodes() == 6);  // Q, A_1_1, A_1_2, J, R_1, R_2
    CHECK(ParentNamesOf(one, "A_1_2") ==
          std::vector<std::string>{"Q", "A_1_1"});
    CHECK(ParentNamesOf(one, "J") ==
          std::vector<std::string>{"Q", "A_1_1", "A_1_2"});

    CidModel three = ZooBuild("debate", {{"rounds", "3"}});
    CHECK(three.num_nodes() == 10);
    CHECK(ParentNamesOf(three, "A_3_1") ==
          std::vector<std::string>{"Q", "A_1_1", "A_1_2", "A_2_1", "A_2_2"});
    CHECK(ParentNamesOf(three, "J").size() == 7);

    // A constant judge ignores the debate entirely.
    CidModel constant = ZooBuild("debate", {{"judge", "constant1"}});
    const Cpt* cpt = constant.cpt(constant.RequireNode("J"));
    REQUIRE(cpt != nullptr);
    for (const std::vector<double>& row : cpt->rows) {
      CHECK(row == std::vector<double>{1.0, 0.0, 0.0});
    }
  }

  SUBCASE("debate_blind keeps the second speaker in the dark") {
    CidModel blind = ZooBuild("debate_blind");
    CHECK(ParentNamesOf(blind, "A_1_1") == std::vector<std::string>{"Q"});
    CHECK(ParentNamesOf(blind, "A_1_2") == std::vector<std::string>{"Q"});
    CHECK(blind.node(blind.RequireNode("J")).outcomes ==
          std::vector<std::string>{"j1", "j2"});
  }
}

TEST_CASE("zoo utility domains derive from the attained values") {
  CidModel sup = ZooBuild("supervised_learning");
  int reward = sup.RequireNode("Reward");
  CHECK(sup.UtilityValues(reward) == std::vector<double>{0.0, 1.0});
  CHECK(sup.node(reward).outcomes == std::vector<std::string>{"0", "1"});

  CidModel deb = ZooBuild("debate");
  int r1 = deb.RequireNode("R_1");
  CHECK(deb.UtilityValues(r1) == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(deb.node(r1).outcomes == std::vector<std::string>{"0", "0.5", "1"});
}

TEST_CASE("wireheading experiment separates the two reward bases") {
  WireheadingReport report = WireheadingExperiment();
  CHECK(report.params ==
        ZooParams{{"horizon", "3"}, {"tamper_noop", "0"}});

  // With a modifiable basis the optimum hacks immediately and banks a
  // certain reward of 1 per step.
  CHECK(report.modifiable.value == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(report.modifiable.first_action == "tamper");
  CHECK(report.modifiable.tampers);

  // Judged by the initial basis, tampering only forfeits clean-state reward:
  // the best run works throughout and collects 1 + 0.9 + 0.81.
  CHECK(report.current.value == doctest::Approx(2.71).epsilon(1e-9));
  CHECK(report.current.first_action == "work");
  CHECK_FALSE(report.current.tampers);
  CHECK(report.modifiable.value > report.current.value + 0.2);

  // Policies are usable as-is.
  CidModel modifiable = ZooBuild("modifiable_rf");
  CHECK(ExpectedUtility(modifiable, report.modifiable.policy, "agent") ==
        doctest::Approx(3.0).epsilon(1e-9));

  // Making tampering inert removes the incentive in both arms.
  WireheadingReport inert = WireheadingExperiment({{"tamper_noop", "1"}});
  CHECK(inert.modifiable.value == doctest::Approx(2.71).epsilon(1e-9));
  CHECK(inert.current.value == doctest::Approx(2.71).epsilon(1e-9));
  CHECK_FALSE(inert.modifiable.tampers);
  CHECK_FALSE(inert.current.tampers);

  CHECK_THROWS_WITH_AS(WireheadingExperiment({{"horizon", "5"}}),
                       "zoo entry 'wireheading_experiment': parameter "
                       "'horizon' must be between 2 and 4",
                       CidError);
}

TEST_CASE("zoo models solve to sensible optima") {
  // ida: the distilled answer A_hat matches Q with probability 0.8; the
  // system should copy the question's designated answer.
  CidModel ida = ZooBuild("ida");
  SolveResult res = SolveSingleAgent(ida, "system", SolveMethod::kAuto);
  CHECK(res.value.at("system") == doctest::Approx(0.8).epsilon(1e-9));

  // supervised_learning: echoing the matching label earns 1 always.
  CidModel sup = ZooBuild("supervised_learning");
  SolveResult sres = SolveSingleAgent(sup, "system", SolveMethod::kAuto);
  CHECK(sres.value.at("system") == doctest::Approx(1.0).epsilon(1e-9));

  // debate_blind is matching pennies: no pure equilibrium exists.
  CidModel blind = ZooBuild("debate_blind");
  CHECK(PureNashEquilibria(blind).empty());
}

}  // namespace
}  // namespace cid
