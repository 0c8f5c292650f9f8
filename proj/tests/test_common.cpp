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

#include <cstdlib>
#include <string>
#include <vector>

#include "doctest.h"

#include "cid/common.hpp"

namespace cid {
namespace {

TEST_CASE("FormatNumber picks the shortest faithful form") {
  CHECK(FormatNumber(0.0) == "0");
  CHECK(FormatNumber(1.0) == "1");
  CHECK(FormatNumber(-1.0) == "-1");
  CHECK(FormatNumber(0.5) == "0.5");
  CHECK(FormatNumber(0.25) == "0.25");
  CHECK(FormatNumber(1.0 / 3.0) == "0.333333333333");
  CHECK(FormatNumber(2.5) == "2.5");
  CHECK(FormatNumber(1e-3) == "0.001");
  CHECK(FormatNumber(2.71) == "2.71");
}

TEST_CASE("FormatNumber round-trips faithful values") {
  std::vector<double> values = {0.1, 0.2, 0.3, 0.7, 1.5, 2.71828, 100.0,
                                -0.125, 1e6, 3.25e-4, 0.9999999};
  for (double v : values) {
    std::string s = FormatNumber(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
}

TEST_CASE("ConfigIndexer runs the last position fastest") {
  ConfigIndexer idx({2, 3, 2});
  CHECK(idx.count() == 12);
  CHECK(idx.arity() == 3);
  CHECK(idx.IndexOf({0, 0, 0}) == 0);
  CHECK(idx.IndexOf({0, 0, 1}) == 1);
  CHECK(idx.IndexOf({0, 1, 0}) == 2);
  CHECK(idx.IndexOf({1, 2, 1}) == 11);
  for (std::int64_t i = 0; i < idx.count(); ++i) {
    CHECK(idx.IndexOf(idx.DigitsOf(i)) == i);
    for (int pos = 0; pos < idx.arity(); ++pos) {
      CHECK(idx.DigitAt(i, pos) == idx.DigitsOf(i)[pos]);
    }
  }
}

TEST_CASE("ConfigIndexer of no positions has one configuration") {
  ConfigIndexer idx{std::vector<int>{}};
  CHECK(idx.count() == 1);
  CHECK(idx.DigitsOf(0).empty());
}

TEST_CASE("resource caps are settable and restorable") {
  std::uint64_t factor = MaxFactorEntries();
  std::uint64_t policies = MaxPolicies();
  CHECK(factor == (std::uint64_t{1} << 22));
  CHECK(policies == 1000000);
  SetMaxFactorEntries(128);
  SetMaxPolicies(7);
  CHECK(MaxFactorEntries() == 128);
  CHECK(MaxPolicies() == 7);
  SetMaxFactorEntries(factor);
  SetMaxPolicies(policies);
}

TEST_CASE("Fail throws a coded error") {
  try {
    Fail(ErrorCode::kEvidence, "boom");
    FAIL("unreachable");
  } catch (const CidError& e) {
    CHECK(e.code() == ErrorCode::kEvidence);
    CHECK(std::string(e.what()) == "boom");
  }
}

}  // namespace
}  // namespace cid
