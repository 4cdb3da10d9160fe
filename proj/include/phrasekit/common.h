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

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace phrasekit {

using WordId = std::uint32_t;
using TagId = std::uint32_t;
using CandidateId = std::uint32_t;
using DocId = std::uint32_t;

inline constexpr CandidateId kNoCandidate = static_cast<CandidateId>(-1);

// Raised for malformed or unusable input data. The command-line front end maps
// it to exit status 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input-file error carrying the 1-based line number it was detected on.
class ParseError : public DataError {
 public:
  ParseError(const std::string &file, std::size_t line, const std::string &msg)
      : DataError(file + ":" + std::to_string(line) + ": " + msg), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Diagnostics. Messages go to the installed sink (stderr by default); tests
// silence it with set_log_sink(nullptr).
enum class LogLevel { kInfo, kWarning };
void log(LogLevel level, std::string_view message);
void set_log_sink(std::ostream *sink);

}  // namespace phrasekit
