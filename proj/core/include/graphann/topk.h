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

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

namespace graphann {

/// Bounded selection of the `capacity` smallest (distance, id) pairs.
/// Ordering is lexicographic, so equal distances resolve by ascending id.
class TopK {
 public:
  using Entry = std::pair<float, uint32_t>;

  explicit TopK(size_t capacity) : capacity_(capacity) {
    heap_.reserve(capacity + 1);
  }

  void clear() { heap_.clear(); }
  size_t size() const { return heap_.size(); }
  bool full() const { return heap_.size() >= capacity_; }
  /// Largest retained entry; only meaningful when non-empty.
  const Entry& worst() const { return heap_.front(); }

  void push(float distance, uint32_t id) {
    const Entry e{distance, id};
    if (heap_.size() < capacity_) {
      heap_.push_back(e);
      std::push_heap(heap_.begin(), heap_.end());
    } else if (capacity_ > 0 && e < heap_.front()) {
      std::pop_heap(heap_.begin(), heap_.end());
      heap_.back() = e;
      std::push_heap(heap_.begin(), heap_.end());
    }
  }

  /// Ascending contents; leaves the selector empty.
  std::vector<Entry> take_sorted() {
    std::sort_heap(heap_.begin(), heap_.end());
    std::vector<Entry> out;
    out.swap(heap_);
    heap_.reserve(capacity_ + 1);
    return out;
  }

 private:
  size_t capacity_;
  std::vector<Entry> heap_;
};

}  // namespace graphann
