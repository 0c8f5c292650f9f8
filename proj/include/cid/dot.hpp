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

#ifndef CID_DOT_HPP_
#define CID_DOT_HPP_

#include <string>

#include "cid/model.hpp"

namespace cid {

// Deterministic DOT text: nodes in declaration order (chance ellipse,
// decision box, utility diamond), then edges grouped by child; information
// links are dashed. With `color_agents`, decisions and utilities are filled
// from a fixed 8-color palette indexed by agent declaration order (mod 8).
std::string ExportDot(const CidModel& model, bool color_agents = false);

}  // namespace cid

#endif  // CID_DOT_HPP_
