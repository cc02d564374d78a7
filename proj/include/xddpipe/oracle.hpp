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

// Brute-force reference timing: integer execution graphs, a scalar bus
// arbiter, and path x configuration enumeration. Depends on the program
// and pipeline descriptions only.

#ifndef XDDPIPE_ORACLE_HPP
#define XDDPIPE_ORACLE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "xddpipe/pipeline_spec.hpp"
#include "xddpipe/program.hpp"

namespace xddpipe::oracle {

struct BusRequester {
  std::int64_t ready = 0;
  bool uses_bus = true;
};

/// Grant times; nullopt for requesters that stay off the bus.
struct BusSchedule {
  std::optional<std::int64_t> me;
  std::vector<std::optional<std::int64_t>> fes;
  std::vector<int> order;  ///< grant order, -1 for the memory access
};

/// First come first served, the memory access first on equal ready times,
/// fetches in program order otherwise. Each grant holds the bus `lambda`
/// cycles. `me_ready` is empty when the memory access does not use the bus.
BusSchedule simulate_contention(std::optional<std::int64_t> me_ready, const std::vector<BusRequester>& fes,
                                std::int64_t lambda);

/// Vertex (instruction, stage) with its latency under one configuration.
/// `floor` is a lower bound on the start (a bus grant).
struct XgVertex {
  int instr = 0;
  int stage = 0;
  std::int64_t latency = 0;
  std::int64_t floor = 0;
};

/// `solid` edges wait for the end of `from`, the others for its start.
struct XgEdge {
  int from = 0;
  int to = 0;
  bool solid = true;
};

struct ScalarXg {
  std::vector<XgVertex> vertices;
  std::vector<XgEdge> edges;
};

struct VertexTime {
  std::int64_t start = 0;
  std::int64_t end = 0;
};

/// Earliest start of every vertex: the largest of 0, its floor, and
/// every incoming dependency. Throws std::invalid_argument on a cycle.
std::vector<VertexTime> solve_xg(const ScalarXg& g);

/// One dynamic cache access of a path that may or may not miss.
struct DynamicAccess {
  int position = 0;  ///< index into the path's instruction list
  AccessKind kind = AccessKind::kFetch;
  std::string name;  ///< static access name
};

/// The instructions along a block path and the graph they form, with
/// latencies left at their hit values.
class PathGraph {
 public:
  PathGraph(const Cfg& cfg, const PipelineSpec& p, const std::vector<int>& blocks);

  const std::vector<DynamicAccess>& accesses() const { return accesses_; }
  std::size_t instruction_count() const { return instrs_.size(); }

  /// Times of every vertex with `miss[a]` deciding access a, bus grants
  /// included. Row-major: instruction then stage.
  std::vector<VertexTime> solve(const std::vector<bool>& miss) const;
  /// End of the last vertex, 0 for an empty path.
  std::int64_t total(const std::vector<bool>& miss) const;

  /// Bus windows: vertex of the memory access, then its fetches.
  struct Window {
    int me = 0;
    std::vector<int> fes;
  };
  const std::vector<Window>& windows() const { return windows_; }
  const ScalarXg& graph() const { return graph_; }

 private:
  const PipelineSpec* spec_;
  std::vector<const InstructionDescriptor*> instrs_;
  std::vector<int> block_of_;  // path position per instruction
  std::vector<DynamicAccess> accesses_;
  ScalarXg graph_;
  std::vector<Window> windows_;
  // Per vertex: access index deciding its latency / bus use, -1 if none.
  std::vector<int> access_of_;
  std::vector<bool> bus_capable_;
  std::vector<bool> always_miss_;
  int stages_ = 0;
};

/// Complete entry-to-exit paths with every loop run exactly its bound
/// each time it is entered. Throws std::length_error above `max_paths`.
std::vector<std::vector<int>> complete_paths(const Cfg& cfg, std::size_t max_paths = 1u << 14);

struct Enumerated {
  std::vector<int> path;
  std::vector<bool> miss;  ///< per dynamic access of the path
  std::int64_t total = 0;
};

inline constexpr std::size_t kEnumerationGuard = std::size_t{1} << 14;

/// Every (path, configuration) pair. Throws std::length_error when there
/// are more than `guard` pairs.
std::vector<Enumerated> enumerate(const Cfg& cfg, const PipelineSpec& p, std::size_t guard = kEnumerationGuard);

}  // namespace xddpipe::oracle

#endif  // XDDPIPE_ORACLE_HPP
