// Copyright 2026 The dialseg Authors
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

#ifndef DIALSEG_SEGMENTATION_HPP_
#define DIALSEG_SEGMENTATION_HPP_

#include <cstddef>
#include <vector>

namespace dialseg {

// A set of boundary gaps over an n-utterance document. Gap g separates
// utterance g-1 from utterance g.
struct Segmentation {
  std::size_t n = 0;
  std::vector<std::size_t> boundaries;  // sorted, unique, within [1, n-1]

  // Sorts and de-duplicates; throws Error(kInvalidArgument) on a gap outside
  // [1, n-1].
  static Segmentation Make(std::size_t n, std::vector<std::size_t> boundaries);

  std::size_t segment_count() const { return boundaries.size() + 1; }
  bool operator==(const Segmentation&) const = default;
};

}  // namespace dialseg

#endif  // DIALSEG_SEGMENTATION_HPP_
