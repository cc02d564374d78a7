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

// Resources, step programs, and their compilation to transition matrices.

#ifndef XDDPIPE_PIPELINE_MODEL_HPP
#define XDDPIPE_PIPELINE_MODEL_HPP

#include <optional>
#include <string>
#include <vector>

#include "xddpipe/algebra.hpp"
#include "xddpipe/pipeline_spec.hpp"
#include "xddpipe/program.hpp"

namespace xddpipe {

enum class ResourceKind : std::uint8_t { kSingle, kFifo, kRegister, kMemoryOrder, kFetchOrder };

/// A FIFO's slots run newest first; waiting reads only the oldest.
struct Resource {
  std::string name;
  ResourceKind kind = ResourceKind::kSingle;
  std::vector<Eigen::Index> slots;

  Eigen::Index oldest() const { return slots.back(); }
};

struct Step {
  enum class Kind : std::uint8_t { kWait, kRelease, kConsume };
  Kind kind = Kind::kWait;
  int resource = -1;  ///< WAIT / RELEASE
  Xdd latency;        ///< CONSUME

  static Step wait(int r) { return {Kind::kWait, r, {}}; }
  static Step release(int r) { return {Kind::kRelease, r, {}}; }
  static Step consume(Xdd l) { return {Kind::kConsume, -1, l}; }
};

/// A bus request issued right after the WAIT phase of a vertex.
struct BusRequest {
  AccessKind kind = AccessKind::kFetch;
  Access access = Access::kAlwaysMiss;
  std::optional<EventId> event;  ///< NC accesses
};

struct StepProgram {
  int instr = -1;  ///< position in its block, -1 when unattached
  int stage = -1;
  std::vector<Step> steps;
  /// Number of leading WAIT steps; the bus point sits after them.
  std::size_t wait_count = 0;
  std::optional<BusRequest> bus;
};

/// Inventory index -> event base, as registered in one store.
struct EventMap {
  std::vector<std::uint32_t> bases;
  EventId id(std::uint32_t inventory_index, std::uint32_t generation = 0) const {
    return EventId{bases.at(inventory_index), generation};
  }
};

/// Registers one event base per inventory entry, in inventory order.
EventMap register_events(XddStore& store, const Cfg& cfg);

/// Deterministic slot layout implied by a pipeline description.
LayoutPtr build_layout(const PipelineSpec& p);

class PipelineModel {
 public:
  PipelineModel(XddStore& store, PipelineSpec spec);

  XddStore& store() const { return *store_; }
  const PipelineSpec& spec() const { return spec_; }
  const LayoutPtr& layout() const { return layout_; }
  const std::vector<Resource>& resources() const { return resources_; }
  int resource_index(const std::string& name) const;  ///< throws std::out_of_range
  int stage_count() const { return static_cast<int>(spec_.stages.size()); }

  /// Step program of `instr` at stage `stage` (an index into spec().stages).
  StepProgram gen_steps(const InstructionDescriptor& instr, int stage, const EventMap& events) const;
  /// All programs of a block, instruction-major then stage-minor.
  std::vector<StepProgram> gen_block(const std::vector<InstructionDescriptor>& instrs,
                                     const EventMap& events) const;

 private:
  XddStore* store_;
  PipelineSpec spec_;
  LayoutPtr layout_;
  std::vector<Resource> resources_;
  // Per stage: resource ids, -1 when absent.
  std::vector<int> queue_after_;
  std::vector<int> pipeline_order_;
  std::vector<std::vector<int>> program_order_;   // per FU (or one entry)
  std::vector<std::vector<int>> capacity_order_;  // per FU (or one entry)
  int fetch_order_ = -1;
  int mem_load_ = -1;
  int mem_store_ = -1;
  std::vector<int> registers_;

  Xdd access_latency(int base, Access a, std::optional<std::uint32_t> event, const EventMap& events) const;
};

/// Throws InvariantViolation unless the program is WAIT* RELEASE* CONSUME RELEASE*.
void check_shape(const StepProgram& sp);

/// Steps [from, to) of one program, preceded by the implicit reset when
/// `reset` is set. Used to cut vertices at bus points.
struct StepSpan {
  const StepProgram* program = nullptr;
  std::size_t from = 0;
  std::size_t to = 0;
  bool reset = true;
};

/// Whole programs [first, last) as spans.
std::vector<StepSpan> whole_programs(const std::vector<StepProgram>& programs, std::size_t first,
                                     std::size_t last);

/// Product m_reset · M_step1 · M_step2 · ... of elementary matrices.
TransitionMatrix compile_steps(const StepProgram& sp, const PipelineModel& model);
/// Product of the spans' matrices in order. Each step is folded into the
/// running product as a column operation (right-multiplication by an
/// elementary matrix only touches one column).
TransitionMatrix compile_spans(const std::vector<StepSpan>& spans, const PipelineModel& model);
/// Evaluation order: instruction-major, stage-minor. Identity when empty.
TransitionMatrix compile_block(const std::vector<StepProgram>& programs, const PipelineModel& model);

/// Applies the step transitions one by one to a state.
StateVector interpret(const StepProgram& sp, const PipelineModel& model, StateVector s);
StateVector interpret(const std::vector<StepProgram>& programs, const PipelineModel& model,
                      StateVector s);
StateVector interpret_spans(const std::vector<StepSpan>& spans, const PipelineModel& model,
                            StateVector s);

std::string to_text(const StepProgram& sp, const PipelineModel& model);

}  // namespace xddpipe

#endif  // XDDPIPE_PIPELINE_MODEL_HPP
