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

#include "segmentation.hpp"

#include <algorithm>
#include <string>

#include "error.hpp"

namespace dialseg {

Segmentation Segmentation::Make(std::size_t n,
                                std::vector<std::size_t> boundaries) {
  std::sort(boundaries.begin(), boundaries.end());
  boundaries.erase(std::unique(boundaries.begin(), boundaries.end()),
                   boundaries.end());
  for (auto g : boundaries) {
    if (g < 1 || g >= n) {
      Fail(ErrorCode::kInvalidArgument,
           "boundary " + std::to_string(g) + " outside [1, " +
               std::to_string(n == 0 ? 0 : n - 1) + "]");
    }
  }
  return Segmentation{n, std::move(boundaries)};
}

}  // namespace dialseg
