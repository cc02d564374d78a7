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

// Program model: a CFG of basic blocks of classified instructions.

#ifndef XDDPIPE_PROGRAM_HPP
#define XDDPIPE_PROGRAM_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "xddpipe/instruction.hpp"
#include "xddpipe/pipeline_spec.hpp"

namespace xddpipe {

struct BasicBlock {
  std::string id;
  std::vector<InstructionDescriptor> instructions;
  bool synthetic = false;

  friend bool operator==(const BasicBlock&, const BasicBlock&) = default;
};

enum class AccessKind : std::uint8_t { kFetch, kData };

struct EventAccess {
  std::string name;  ///< IC_<block>_<idx> or DC_<block>_<idx>
  int block = 0;
  int instr = 0;
  AccessKind kind = AccessKind::kFetch;

  friend bool operator==(const EventAccess&, const EventAccess&) = default;
};

class Cfg {
 public:
  std::vector<BasicBlock> blocks;
  std::vector<std::pair<int, int>> edges;  ///< block indices, document order
  int entry = 0;
  int exit = 0;
  std::map<int, int> loop_bounds;  ///< header -> max iterations per entry

  int block_index(const std::string& id) const;  ///< -1 when absent
  std::vector<int> successors(int b) const;
  std::vector<int> predecessors(int b) const;

  /// Immediate dominator of every block (entry maps to itself).
  std::vector<int> immediate_dominators() const;
  bool dominates(int a, int b) const;
  /// Edges u -> h with h dominating u.
  std::vector<std::pair<int, int>> back_edges() const;
  /// Blocks of the natural loop of `header` (header included), ascending.
  std::vector<int> natural_loop(int header) const;
  /// Headers whose loops contain `b`, outermost first.
  std::vector<int> enclosing_loops(int b) const;
  bool is_acyclic() const { return loop_bounds.empty(); }

  friend bool operator==(const Cfg&, const Cfg&) = default;
};

/// Parses and validates. Inserts synthetic "alpha"/"omega" blocks when the
/// entry has predecessors or the exit is not the unique sink. Throws
/// ValidationError with the offending location.
Cfg parse_program(const std::string& json_text);
std::string print_program(const Cfg& cfg);
/// Structural checks: reachability, single exit, bounded cycles.
void validate(const Cfg& cfg);
/// Register and stage references against a concrete pipeline.
void validate_against(const Cfg& cfg, const PipelineSpec& p);

/// One entry per NC access; block order, then instruction order, fetch
/// before data. Matches the fetch_event / data_event indices.
std::vector<EventAccess> event_inventory(const Cfg& cfg);

}  // namespace xddpipe

#endif  // XDDPIPE_PROGRAM_HPP
