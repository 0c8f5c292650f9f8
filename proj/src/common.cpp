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

#include "cid/common.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace cid {
namespace {

std::atomic<std::uint64_t> g_max_factor_entries{std::uint64_t{1} << 22};
std::atomic<std::uint64_t> g_max_policies{1000000};

}  // namespace

std::uint64_t MaxFactorEntries() { return g_max_factor_entries.load(); }
std::uint64_t MaxPolicies() { return g_max_policies.load(); }
void SetMaxFactorEntries(std::uint64_t n) { g_max_factor_entries.store(n); }
void SetMaxPolicies(std::uint64_t n) { g_max_policies.store(n); }

std::string FormatNumber(double v) {
  if (v == 0.0) return "0";  // avoids "-0"
  char buf[64];
  for (int precision = 1; precision <= 12; ++precision) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

ConfigIndexer::ConfigIndexer(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  strides_.assign(sizes_.size(), 1);
  for (int i = static_cast<int>(sizes_.size()) - 1; i >= 0; --i) {
    strides_[i] = count_;
    count_ *= sizes_[i];
  }
}

std::int64_t ConfigIndexer::IndexOf(const std::vector<int>& digits) const {
  std::int64_t index = 0;
  for (size_t i = 0; i < sizes_.size(); ++i) index += digits[i] * strides_[i];
  return index;
}

std::vector<int> ConfigIndexer::DigitsOf(std::int64_t index) const {
  std::vector<int> digits(sizes_.size());
  for (size_t i = 0; i < sizes_.size(); ++i) {
    digits[i] = static_cast<int>((index / strides_[i]) % sizes_[i]);
  }
  return digits;
}

int ConfigIndexer::DigitAt(std::int64_t index, int pos) const {
  return static_cast<int>((index / strides_[pos]) % sizes_[pos]);
}

}  // namespace cid
