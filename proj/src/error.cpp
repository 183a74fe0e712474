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

#include "error.hpp"

#include <iostream>
#include <mutex>

namespace dialseg {
namespace {

std::mutex g_sink_mutex;

void ToStderr(std::string_view msg) { std::cerr << "warning: " << msg << '\n'; }

WarningSink& Sink() {
  static WarningSink sink = ToStderr;
  return sink;
}

}  // namespace

void SetWarningSink(WarningSink sink) {
  std::lock_guard<std::mutex> lock(g_sink_mutex);
  Sink() = sink ? std::move(sink) : WarningSink(ToStderr);
}

void Warn(std::string_view message) {
  std::lock_guard<std::mutex> lock(g_sink_mutex);
  Sink()(message);
}

}  // namespace dialseg
