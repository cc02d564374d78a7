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

#ifndef XDDPIPE_INSTRUCTION_HPP
#define XDDPIPE_INSTRUCTION_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace xddpipe {

enum class InstrClass : std::uint8_t {
  kAluAdd,
  kAluMul,
  kAluDiv,
  kFpAdd,
  kFpMul,
  kFpDiv,
  kLoad,
  kStore,
  kBranch,
  kNop,
};
inline constexpr int kInstrClassCount = 10;

/// Cache classification of one access.
enum class Access : std::uint8_t { kAlwaysHit, kAlwaysMiss, kNotClassified };

const char* to_string(InstrClass c);
const char* to_string(Access a);
std::optional<InstrClass> parse_instr_class(const std::string& s);
std::optional<Access> parse_access(const std::string& s);

inline bool is_memory(InstrClass c) { return c == InstrClass::kLoad || c == InstrClass::kStore; }
inline bool may_use_bus(Access a) { return a != Access::kAlwaysHit; }

struct InstructionDescriptor {
  std::string id;
  InstrClass cls = InstrClass::kNop;
  std::vector<int> reads;
  std::vector<int> writes;
  Access fetch = Access::kAlwaysHit;
  std::optional<Access> data;  ///< loads and stores only
  /// Index into the program's event inventory, set for NC accesses.
  std::optional<std::uint32_t> fetch_event;
  std::optional<std::uint32_t> data_event;

  bool fetch_uses_bus() const { return may_use_bus(fetch); }
  bool data_uses_bus() const { return data && may_use_bus(*data); }

  friend bool operator==(const InstructionDescriptor&, const InstructionDescriptor&) = default;
};

}  // namespace xddpipe

#endif  // XDDPIPE_INSTRUCTION_HPP
