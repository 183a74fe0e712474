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

// Porter (1980) suffix-stripping stemmer for lowercase ASCII words.

#ifndef DIALSEG_STEMMER_HPP_
#define DIALSEG_STEMMER_HPP_

#include <string>
#include <string_view>

namespace dialseg {

// Words of length <= 2 and words containing non-lowercase-ASCII characters
// are returned unchanged.
std::string PorterStem(std::string_view word);

}  // namespace dialseg

#endif  // DIALSEG_STEMMER_HPP_
