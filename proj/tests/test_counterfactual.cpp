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
#include <random>
#include <string>
#include <vector>

#include "doctest.h"

#include "cid/counterfactual.hpp"
#include "cid/dsl.hpp"
#include "cid/inference.hpp"
#include "cid/model.hpp"
#include "oracles.hpp"

namespace cid {
namespace {

bool AllClose(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > 1e-9) return false;
  }
  return true;
}

PolicyProfile FollowCoin() {
  PolicyProfile profile;
  profile.rules["D"].rows = {{1.0, 0.0}, {0.0, 1.0}};
  return profile;
}

std::vector<std::string> ParentNamesOf(const CidModel& m, const std::string& n) {
  std::vector<std::string> out;
  for (int p : m.node(m.RequireNode(n)).parents) out.push_back(m.node(p).name);
  return out;
}

TEST_CASE("twin name predicate") {
  CHECK(IsTwinName("X_cf"));
  CHECK(IsTwinName("U_C_cf"));
  CHECK_FALSE(IsTwinName("X"));
  CHECK_FALSE(IsTwinName("_cf"));  // no base name
  CHECK_FALSE(IsTwinName("X_CF"));
}

TEST_CASE("functionalize splits chance nodes into noise plus lookup") {
  CidModel m = test::CoinModel();
  ScmModel scm = Functionalize(m);
  REQUIRE(scm.base.num_nodes() == 4);
  CHECK(scm.noise_of.at("C") == "U_C");
  CHECK(scm.IsNoise("U_C"));
  CHECK_FALSE(scm.IsNoise("C"));

  const Node& noise = scm.base.node(scm.base.RequireNode("U_C"));
  CHECK(noise.kind == NodeKind::kChance);
  CHECK(noise.outcomes == std::vector<std::string>{"f0", "f1"});
  CHECK(noise.parents.empty());
  CHECK(scm.base.cpt(scm.base.RequireNode("U_C"))->rows ==
        std::vector<std::vector<double>>{{0.5, 0.5}});

  // The noise node comes first in the rebuilt parent list and the lookup
  // table is deterministic: function f0 plays heads, f1 plays tails.
  CHECK(ParentNamesOf(scm.base, "C") == std::vector<std::string>{"U_C"});
  CHECK(scm.base.cpt(scm.base.RequireNode("C"))->rows ==
        std::vector<std::vector<double>>{{1.0, 0.0}, {0.0, 1.0}});
  CHECK(scm.base.node(scm.base.RequireNode("C")).world);

  // Decisions and utilities pass through untouched.
  CHECK(ParentNamesOf(scm.base, "D") == std::vector<std::string>{"C"});
  CHECK(scm.base.utility(scm.base.RequireNode("U"))->values ==
        std::vector<double>{1.0, 0.0, 0.0, 1.0});

  CHECK(std::abs(ExpectedUtility(scm.base, FollowCoin(), "a") - 1.0) <= 1e-9);
}

TEST_CASE("functionalize prunes zero-probability response functions") {
  CidModel m = ParseModel(R"(
agent a;
chance X { domain: [x0, x1]; cpt { () -> x0: 1; } }
chance Y { domain: [y0, y1]; parents: [X]; cpt { (x0) -> y1: 1; (x1) -> y0: 1; } }
utility U of a { parents: [Y]; table { (y0) -> 0; (y1) -> 1; } }
)");
  ScmModel scm = Functionalize(m);

  // X is deterministic, so a single response function survives.
  CHECK(scm.base.node(scm.base.RequireNode("U_X")).outcomes ==
        std::vector<std::string>{"f0"});
  CHECK(scm.base.cpt(scm.base.RequireNode("U_X"))->rows ==
        std::vector<std::vector<double>>{{1.0}});

  // Y always answers x0 with y1 and x1 with y0; the label keeps the
  // enumeration index of that function, not a fresh count.
  CHECK(scm.base.node(scm.base.RequireNode("U_Y")).outcomes ==
        std::vector<std::string>{"f2"});
  CHECK(ParentNamesOf(scm.base, "Y") == std::vector<std::string>{"U_Y", "X"});
  CHECK(scm.base.cpt(scm.base.RequireNode("Y"))->rows ==
        std::vector<std::vector<double>>{{0.0, 1.0}, {1.0, 0.0}});
}

TEST_CASE("functionalize input restrictions") {
  CidModel twins = ParseModel(R"(
agent a;
chance X { domain: [x0, x1]; cpt { () -> x0: 1; } }
chance X_cf { domain: [x0, x1]; cpt { () -> x0: 1; } }
utility U of a { parents: [X, X_cf]; table { (_, _) -> 1; } }
)");
  CHECK_THROWS_WITH_AS(
      Functionalize(twins),
      "node 'X_cf' uses the reserved counterfactual suffix '_cf'", CidError);

  CidModel collision = ParseModel(R"(
agent a;
chance U_C { domain: [u0, u1]; cpt { () -> u0: 0.5, u1: 0.5; } }
chance C { domain: [c0, c1]; cpt { () -> c0: 0.5, c1: 0.5; } }
utility U of a { parents: [C]; table { (c0) -> 1; (c1) -> 0; } }
)");
  CHECK_THROWS_WITH_AS(Functionalize(collision),
                       "noise name 'U_C' collides with an existing node",
                       CidError);

  CidModelBuilder wide;
  wide.AddAgent("a");
  std::vector<std::string> roots;
  for (int i = 0; i < 4; ++i) {
    std::string name = "X" + std::to_string(i);
    wide.AddChance(name, {"y", "n"}, {});
    wide.SetCpt(name, {{0.5, 0.5}});
    roots.push_back(name);
  }
  wide.AddChance("Z", {"y", "n"}, roots);
  wide.SetCpt("Z", std::vector<std::vector<double>>(16, {0.5, 0.5}));
  wide.AddUtility("U", "a", {"Z"});
  wide.SetUtility("U", {1.0, 0.0});
  CidModel big = wide.Build();
  try {
    Functionalize(big);
    FAIL("unreachable");
  } catch (const CidError& e) {
    CHECK(e.code() == ErrorCode::kResource);
    CHECK(std::string(e.what()).find("response functions") !=
          std::string::npos);
  }
}

TEST_CASE("functionalization preserves the observable joint") {
  std::mt19937 rng(90210);
  test::RandomModelOptions opt;
  opt.max_nodes = 5;
  opt.max_outcomes = 2;
  opt.max_rows = 4;
  opt.world_tags = true;
  for (int trial = 0; trial < 20; ++trial) {
    CidModel m = test::RandomModel(rng, opt);
    ScmModel scm = Functionalize(m);
    PolicyProfile profile = trial % 2 == 0 ? test::RandomPureProfile(m, rng)
                                           : UniformProfile(m);
    std::vector<std::string> targets;
    for (int i = 0; i < m.num_nodes(); ++i) targets.push_back(m.node(i).name);
    Factor lhs = Marginal(InduceNetwork(scm.base, profile), targets, {});
    auto rhs = test::BruteMarginal(InduceNetwork(m, profile), targets, {});
    REQUIRE(rhs.has_value());
    CHECK(AllClose(lhs.values, *rhs));
  }
}

TEST_CASE("interventions rewrite mechanisms in place") {
  CidModel m = test::CoinModel();

  InterventionSpec force;
  force.force["C"] = "tails";
  CidModel forced = ApplyInterventions(m, force);
  CHECK(forced.cpt(forced.RequireNode("C"))->rows ==
        std::vector<std::vector<double>>{{0.0, 1.0}});
  CHECK(forced.node(forced.RequireNode("C")).world);
  CHECK(std::abs(ExpectedUtility(forced, FollowCoin(), "a") - 1.0) <= 1e-9);

  InterventionSpec replace;
  replace.replace["C"] = {{0.25, 0.75}};
  CidModel replaced = ApplyInterventions(m, replace);
  CHECK(replaced.cpt(replaced.RequireNode("C"))->rows ==
        std::vector<std::vector<double>>{{0.25, 0.75}});
  // The original model is untouched.
  CHECK(m.cpt(m.RequireNode("C"))->rows ==
        std::vector<std::vector<double>>{{0.5, 0.5}});
}

TEST_CASE("intervened decisions become chance nodes without utility parents") {
  CidModel m = ParseModel(R"(
agent a;
chance X { domain: [x0, x1]; cpt { () -> x0: 0.5, x1: 0.5; } }
utility W of a { parents: [X]; table { (x0) -> 1; (x1) -> 0; } }
decision D of a { domain: [l, r]; observes: [X, W]; }
utility V of a { parents: [D]; table { (l) -> 1; (r) -> 0; } }
)");
  InterventionSpec spec;
  spec.force["D"] = "l";
  CidModel done = ApplyInterventions(m, spec);
  const Node& d = done.node(done.RequireNode("D"));
  CHECK(d.kind == NodeKind::kChance);
  CHECK(ParentNamesOf(done, "D") == std::vector<std::string>{"X"});
  CHECK(done.cpt(done.RequireNode("D"))->rows ==
        std::vector<std::vector<double>>{{1.0, 0.0}, {1.0, 0.0}});
  CHECK(done.DecisionsOf("a").empty());
  CHECK(done.Validation().ok);
}

TEST_CASE("intervention argument checks") {
  CidModel m = test::CoinModel();
  InterventionSpec spec;

  spec.force["Ghost"] = "h";
  CHECK_THROWS_WITH_AS(ApplyInterventions(m, spec),
                       "unknown intervention target 'Ghost'", CidError);

  spec = {};
  spec.force["U"] = "1";
  CHECK_THROWS_WITH_AS(ApplyInterventions(m, spec),
                       "utility node 'U' cannot be intervened", CidError);

  spec = {};
  spec.force["C"] = "heads";
  spec.replace["C"] = {{1.0, 0.0}};
  CHECK_THROWS_WITH_AS(ApplyInterventions(m, spec),
                       "node 'C' has both a forced outcome and a replacement",
                       CidError);

  spec = {};
  spec.force["C"] = "sideways";
  CHECK_THROWS_WITH_AS(ApplyInterventions(m, spec),
                       "node 'C' has no outcome 'sideways'", CidError);

  spec = {};
  spec.replace["C"] = {{0.5, 0.5}, {0.5, 0.5}};
  CHECK_THROWS_WITH_AS(ApplyInterventions(m, spec),
                       "replacement for 'C' has 2 rows, expected 1", CidError);

  spec = {};
  spec.replace["C"] = {{1.0}};
  CHECK_THROWS_WITH_AS(ApplyInterventions(m, spec),
                       "replacement row for 'C' has width 1, expected 2",
                       CidError);
}

TEST_CASE("twin networks copy every non-noise node once") {
  ScmModel scm = Functionalize(test::CoinModel());

  InterventionSpec none;
  CidModel plain = TwinNetwork(scm, none);
  REQUIRE(plain.num_nodes() == 7);
  CHECK(plain.node(plain.RequireNode("D_cf")).kind == NodeKind::kDecision);
  CHECK(ParentNamesOf(plain, "C_cf") == std::vector<std::string>{"U_C"});
  CHECK(ParentNamesOf(plain, "D_cf") == std::vector<std::string>{"C_cf"});
  CHECK(ParentNamesOf(plain, "U_cf") ==
        std::vector<std::string>{"C_cf", "D_cf"});
  CHECK(plain.node(plain.RequireNode("C_cf")).world);
  CHECK(plain.Validation().ok);

  InterventionSpec spec;
  spec.force["D_cf"] = "tails";
  CidModel twin = TwinNetwork(scm, spec);
  const Node& copy = twin.node(twin.RequireNode("D_cf"));
  CHECK(copy.kind == NodeKind::kChance);
  CHECK(twin.cpt(twin.RequireNode("D_cf"))->rows ==
        std::vector<std::vector<double>>{{0.0, 1.0}, {0.0, 1.0}});
  // The factual side is untouched by the intervention.
  CHECK(twin.node(twin.RequireNode("D")).kind == NodeKind::kDecision);
  CHECK(twin.cpt(twin.RequireNode("C"))->rows ==
        std::vector<std::vector<double>>{{1.0, 0.0}, {0.0, 1.0}});
}

TEST_CASE("twin intervention targets must be counterfactual copies") {
  ScmModel scm = Functionalize(test::CoinModel());
  InterventionSpec spec;

  spec.force["D"] = "tails";
  CHECK_THROWS_WITH_AS(TwinNetwork(scm, spec),
                       "twin interventions target counterfactual copies; 'D' "
                       "lacks the '_cf' suffix",
                       CidError);

  spec = {};
  spec.force["Ghost_cf"] = "tails";
  CHECK_THROWS_WITH_AS(TwinNetwork(scm, spec),
                       "intervention 'Ghost_cf' has no source node 'Ghost'",
                       CidError);

  spec = {};
  spec.force["U_C_cf"] = "f0";
  CHECK_THROWS_WITH_AS(TwinNetwork(scm, spec),
                       "noise node 'U_C' cannot be intervened", CidError);

  spec = {};
  spec.force["U_cf"] = "1";
  CHECK_THROWS_WITH_AS(TwinNetwork(scm, spec),
                       "utility node 'U' cannot be intervened", CidError);

  ScmModel stale;
  stale.base = test::CoinModel();
  stale.noise_of["C"] = "U_C";
  CHECK_THROWS_WITH_AS(TwinNetwork(stale, {}),
                       "noise map entry 'C' -> 'U_C' names a missing node",
                       CidError);
}

TEST_CASE("counterfactual queries condition on facts and intervene on copies") {
  ScmModel scm = Functionalize(test::CoinModel());
  InterventionSpec spec;
  spec.force["D_cf"] = "tails";
  Evidence seen{{"C", "heads"}, {"D", "heads"}};

  Factor q = CounterfactualQuery(scm, spec, seen, {"U_cf"}, FollowCoin());
  REQUIRE(q.values.size() == 2);  // derived utility outcomes 0 and 1
  CHECK(std::abs(q.values[0] - 1.0) <= 1e-9);
  CHECK(std::abs(q.values[1] - 0.0) <= 1e-9);

  auto oracle = test::BruteCounterfactual(test::CoinModel(), FollowCoin(), seen,
                                          {{"D_cf", "tails"}}, "U_cf");
  REQUIRE(oracle.has_value());
  CHECK(AllClose(q.values, *oracle));

  CHECK_THROWS_WITH_AS(
      CounterfactualQuery(scm, spec, seen, {"U_cf"}, PolicyProfile{}),
      "policy profile has no rule for decision 'D'", CidError);

  Evidence impossible{{"C", "heads"}, {"D", "tails"}};
  try {
    CounterfactualQuery(scm, spec, impossible, {"U_cf"}, FollowCoin());
    FAIL("unreachable");
  } catch (const CidError& e) {
    CHECK(e.code() == ErrorCode::kEvidence);
  }
  CHECK_FALSE(test::BruteCounterfactual(test::CoinModel(), FollowCoin(),
                                        impossible, {{"D_cf", "tails"}},
                                        "U_cf")
                  .has_value());
}

TEST_CASE("stochastic rules randomize independently per copy") {
  ScmModel scm = Functionalize(test::CoinModel());
  PolicyProfile mixed;
  mixed.rules["D"].rows = {{0.5, 0.5}, {0.5, 0.5}};
  Evidence seen{{"D", "heads"}};

  Factor q = CounterfactualQuery(scm, {}, seen, {"D_cf"}, mixed);
  CHECK(AllClose(q.values, {0.5, 0.5}));

  auto oracle =
      test::BruteCounterfactual(test::CoinModel(), mixed, seen, {}, "D_cf");
  REQUIRE(oracle.has_value());
  CHECK(AllClose(q.values, *oracle));
}

TEST_CASE("counterfactual queries agree with forward simulation") {
  std::mt19937 rng(60601);
  test::RandomModelOptions opt;
  opt.max_nodes = 5;
  opt.max_outcomes = 2;
  opt.max_rows = 4;
  opt.world_tags = true;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 24; ++trial) {
    CidModel m = test::RandomModel(rng, opt);
    ScmModel scm = Functionalize(m);
    PolicyProfile profile = trial % 2 == 0 ? test::RandomPureProfile(m, rng)
                                           : UniformProfile(m);

    std::map<std::string, std::string> full =
        test::RandomPositiveAssignment(m, profile, rng);
    Evidence seen;
    for (const auto& [name, label] : full) {
      if (unit(rng) < 0.4) seen[name] = label;
    }

    InterventionSpec spec;
    std::map<std::string, std::string> do_map;
    if (trial % 3 != 0) {
      std::vector<int> candidates;
      for (int i = 0; i < m.num_nodes(); ++i) {
        if (m.node(i).kind != NodeKind::kUtility) candidates.push_back(i);
      }
      int pick = candidates[static_cast<size_t>(
          std::uniform_int_distribution<int>(
              0, static_cast<int>(candidates.size()) - 1)(rng))];
      const Node& node = m.node(pick);
      std::string label = node.outcomes[static_cast<size_t>(
          std::uniform_int_distribution<int>(
              0, static_cast<int>(node.outcomes.size()) - 1)(rng))];
      spec.force[node.name + "_cf"] = label;
      do_map[node.name + "_cf"] = label;
    }

    int t = std::uniform_int_distribution<int>(0, m.num_nodes() - 1)(rng);
    std::string target = m.node(t).name + "_cf";

    Factor q = CounterfactualQuery(scm, spec, seen, {target}, profile);
    auto oracle = test::BruteCounterfactual(m, profile, seen, do_map, target);
    REQUIRE(oracle.has_value());
    CHECK(AllClose(q.values, *oracle));
  }
}

}  // namespace
}  // namespace cid
