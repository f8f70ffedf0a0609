// Copyright 2026-present the graphann project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace graphann {

/// Collected invariant violations. Keeps the first few messages verbatim
/// and counts the rest.
class AuditReport {
 public:
  static constexpr size_t kMaxMessages = 32;

  void fail(std::string message) {
    ++violations_;
    if (messages_.size() < kMaxMessages) messages_.push_back(std::move(message));
  }
  void merge(const AuditReport& other) {
    violations_ += other.violations_;
    for (const auto& m : other.messages_) {
      if (messages_.size() < kMaxMessages) messages_.push_back(m);
    }
  }

  bool ok() const { return violations_ == 0; }
  size_t violations() const { return violations_; }
  const std::vector<std::string>& messages() const { return messages_; }

 private:
  size_t violations_ = 0;
  std::vector<std::string> messages_;
};

}  // namespace graphann
