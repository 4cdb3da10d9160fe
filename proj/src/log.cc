// Copyright 2026 The Phrasekit Authors.
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

#include <iostream>
#include <mutex>

#include "phrasekit/common.h"

namespace phrasekit {
namespace {

std::ostream *sink = &std::clog;
std::mutex sink_mu;

}  // namespace

void set_log_sink(std::ostream *s) {
  std::lock_guard<std::mutex> lock(sink_mu);
  sink = s;
}

void log(LogLevel level, std::string_view message) {
  std::lock_guard<std::mutex> lock(sink_mu);
  if (sink == nullptr) return;
  *sink << (level == LogLevel::kWarning ? "warning: " : "") << message << '\n';
}

}  // namespace phrasekit
