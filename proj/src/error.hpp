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

#ifndef DIALSEG_ERROR_HPP_
#define DIALSEG_ERROR_HPP_

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dialseg {

// Error categories. The numeric values are mirrored by dialseg_status in the
// C API and by the CLI exit codes.
enum class ErrorCode {
  kInvalidArgument = 1,
  kConfig = 2,
  kParse = 3,
  kIo = 4,
  kEmptyDocument = 5,
  kUndefinedMetric = 6,
  kInternal = 7,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

// Non-fatal diagnostics (skipped documents, malformed coreference chains).
// The default sink writes to stderr; an empty sink restores it.
using WarningSink = std::function<void(std::string_view)>;

void SetWarningSink(WarningSink sink);
void Warn(std::string_view message);

}  // namespace dialseg

#endif  // DIALSEG_ERROR_HPP_
