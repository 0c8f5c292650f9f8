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

#ifndef CID_ZOO_HPP_
#define CID_ZOO_HPP_

#include <map>
#include <string>
#include <vector>

#include "cid/model.hpp"
#include "cid/solve.hpp"

namespace cid {

// Builder parameters as strings, as they arrive from a command line:
// integers ("horizon", "rounds"), flags ("0"/"1"/"false"/"true"), or choices
// ("judge"). Unknown keys and out-of-cap values raise kUsage.
using ZooParams = std::map<std::string, std::string>;

struct ZooEntryInfo {
  std::string name;
  std::string title;
  ZooParams defaults;  // the parameters the structural manifest was built at
};

// The fixed catalog, in declaration order.
const std::vector<ZooEntryInfo>& ZooList();

// Raw JSON text of the structural manifest fixture for one entry.
const std::string& ZooManifest(const std::string& name);

// Builds one catalog model. Defaults reproduce the manifest graph exactly.
//
// Entries and their parameters beyond "horizon" (caps: horizon/rounds <= 4):
//   rl_pomdp          fold_params (default 1; 0 adds Theta_T/Theta_R)
//   modifiable_rf     tamper_noop (default 0; 1 makes tampering inert)
//   current_rf        tamper_noop
//   reward_modeling   add_theta_t (default 0; 1 adds a transition parameter)
//   cirl              team (default 0; 1 merges both owners into one agent)
//   debate            rounds (default 2), judge in {final, constant1}
//   debate_blind      rounds (fixed at 1)
CidModel ZooBuild(const std::string& name, const ZooParams& params = {});

// The wireheading comparison: modifiable_rf vs current_rf under identical
// dynamics, both solved exhaustively.
struct WireheadingArm {
  double value = 0.0;
  std::string first_action;  // optimal action in the start state (clean, true)
  bool tampers = false;
  PolicyProfile policy;
};

struct WireheadingReport {
  ZooParams params;
  WireheadingArm modifiable;
  WireheadingArm current;
};

// Accepts horizon (2..4, default 3) and tamper_noop.
WireheadingReport WireheadingExperiment(const ZooParams& params = {});

}  // namespace cid

#endif  // CID_ZOO_HPP_
