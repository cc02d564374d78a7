// Copyright 2026 The xddpipe Authors
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

#include "xddpipe/instruction.hpp"

#include <array>

namespace xddpipe {

namespace {

constexpr std::array<const char*, kInstrClassCount> kClassNames = {
    "alu-add", "alu-mul", "alu-div", "fp-add", "fp-mul",
    "fp-div",  "load",    "store",   "branch", "nop"};
constexpr std::array<const char*, 3> kAccessNames = {"AH", "AM", "NC"};

}  // namespace

const char* to_string(InstrClass c) { return kClassNames[static_cast<std::size_t>(c)]; }
const char* to_string(Access a) { return kAccessNames[static_cast<std::size_t>(a)]; }

std::optional<InstrClass> parse_instr_class(const std::string& s) {
  for (std::size_t i = 0; i < kClassNames.size(); ++i)
    if (s == kClassNames[i]) return static_cast<InstrClass>(i);
  return std::nullopt;
}

std::optional<Access> parse_access(const std::string& s) {
  for (std::size_t i = 0; i < kAccessNames.size(); ++i)
    if (s == kAccessNames[i]) return static_cast<Access>(i);
  return std::nullopt;
}

}  // namespace xddpipe
