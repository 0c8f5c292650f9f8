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

#ifndef CID_COMMON_HPP_
#define CID_COMMON_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cid {

// Numeric tolerance shared by every probability and utility comparison.
inline constexpr double kTolerance = 1e-9;

enum class ErrorCode {
  kParse,       // DSL or JSON input cannot be turned into a model
  kValidation,  // model constructed but violates a semantic invariant
  kUsage,       // bad arguments to an operation (unknown node, wrong kind, ...)
  kResource,    // a configured resource cap would be exceeded
  kEvidence,    // conditioning event has probability zero
  kInternal,
};

class CidError : public std::runtime_error {
 public:
  CidError(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& message) {
  throw CidError(code, message);
}

// Resource caps. Defaults: 2^22 factor entries, 10^6 enumerated policies.
// Process-global; the CLI wires CID_MAX_FACTOR / CID_MAX_POLICIES to these.
std::uint64_t MaxFactorEntries();
std::uint64_t MaxPolicies();
void SetMaxFactorEntries(std::uint64_t n);
void SetMaxPolicies(std::uint64_t n);

// Canonical decimal rendering: the shortest representation within 12
// significant digits that parses back to the same double, else 12 digits.
std::string FormatNumber(double v);

// Mixed-radix indexing over a tuple of finite domains. The canonical row
// order fixes the last position as fastest-varying.
class ConfigIndexer {
 public:
  ConfigIndexer() = default;
  explicit ConfigIndexer(std::vector<int> sizes);

  std::int64_t count() const { return count_; }
  int arity() const { return static_cast<int>(sizes_.size()); }
  int size(int pos) const { return sizes_[pos]; }

  std::int64_t IndexOf(const std::vector<int>& digits) const;
  std::vector<int> DigitsOf(std::int64_t index) const;
  // Digit at `pos` of the configuration with the given index.
  int DigitAt(std::int64_t index, int pos) const;

 private:
  std::vector<int> sizes_;
  std::vector<std::int64_t> strides_;
  std::int64_t count_ = 1;
};

}  // namespace cid

#endif  // CID_COMMON_HPP_
