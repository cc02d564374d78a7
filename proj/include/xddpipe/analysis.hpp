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

// Worklist analysis over sets of temporal states.

#ifndef XDDPIPE_ANALYSIS_HPP
#define XDDPIPE_ANALYSIS_HPP

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "xddpipe/contention.hpp"

namespace xddpipe {

/// States sharing one time origin (`base`, the start of a block).
/// Insertion-ordered, deduplicated by handle equality.
class StateSet {
 public:
  explicit StateSet(std::string base = {}) : base_(std::move(base)) {}

  const std::string& base() const { return base_; }
  std::size_t size() const { return states_.size(); }
  bool empty() const { return states_.empty(); }
  const StateVector& operator[](std::size_t i) const { return states_[i]; }
  const std::vector<StateVector>& states() const { return states_; }

  /// False when already present.
  bool insert(const StateVector& s);
  bool contains(const StateVector& s) const { return index_.count(s) != 0; }
  /// Throws LayoutMismatch when the bases differ.
  void require_same_base(const StateSet& other) const;
  void clear();

 private:
  std::string base_;
  std::vector<StateVector> states_;
  std::unordered_map<StateVector, std::size_t, StateVectorHash> index_;
};

/// Events mentioned by any slot.
std::set<EventId> state_support(const StateVector& s);

/// Every slot ⊘ t. Throws std::invalid_argument unless t has finite
/// leaves only.
StateVector rebase(const StateVector& s, Xdd t);
/// Every slot ⊗ t.
StateVector restore(const StateVector& s, Xdd t);
/// The time pointer when all its leaves are finite, otherwise its largest
/// finite leaf. Throws InvariantViolation on a +inf leaf or no finite leaf.
Xdd rebase_base(Xdd rho);
/// Sets to -inf, pointwise, every slot value below the `floor` slot.
/// The time pointer is left alone.
StateVector prune_below(const StateVector& s, Eigen::Index floor);

/// Generation bump for events whose base satisfies `in_loop`. Events at
/// `max_gen` are folded away (lo ⊕ hi) and `pessimized` is set.
StateVector bump_generation(const StateVector& s, const std::function<bool(std::uint32_t)>& in_loop,
                            std::uint32_t max_gen, bool* pessimized = nullptr);
/// Same with a per-base cap. `pessimized` is set only when a folded event
/// sits at or above `max_gen`.
StateVector bump_generation(const StateVector& s, const std::function<bool(std::uint32_t)>& in_loop,
                            const std::function<std::uint32_t(std::uint32_t)>& cap, std::uint32_t max_gen,
                            bool* pessimized);

/// Applies one block to a state, splitting at bus points and scheduling
/// each contention window.
class BlockEngine {
 public:
  /// `observe` sees the state at every bus point and at the block end,
  /// with the position of the instruction just reached.
  using Observer = std::function<void(int instr, const StateVector&)>;

  BlockEngine(const PipelineModel& model, std::vector<StepProgram> programs, int window, bool use_matrices);

  StateVector apply(StateVector s, ContentionTrace* trace = nullptr, const Observer& observe = {}) const;

  const std::vector<StepProgram>& programs() const { return programs_; }
  const std::vector<ContentionWindow>& windows() const { return windows_; }
  std::size_t cut_count() const { return cuts_.size(); }

 private:
  StateVector run_segment(StateVector s, std::size_t k) const;

  const PipelineModel* model_;
  std::vector<StepProgram> programs_;
  std::vector<ContentionWindow> windows_;
  std::vector<std::size_t> cuts_;
  bool use_matrices_;
  std::vector<std::vector<StepSpan>> spans_;
  std::vector<TransitionMatrix> matrices_;
};

struct AnalysisOptions {
  std::size_t max_states = 512;  ///< per block input set
  std::uint32_t max_gen = 8;
  bool widen = false;
  std::size_t max_iterations = 200000;
  bool use_matrices = true;
  bool prune = true;
  bool trace_contention = false;
};

struct BlockTiming {
  std::string block;
  std::vector<Xdd> time;  ///< per input state, relative to the block start
  ExtTime worst = ExtTime::neg_inf();
};

/// Largest finite leaf over all states. Throws InvariantViolation on +inf.
ExtTime block_wcet(const BlockTiming& t);

struct BlockResult {
  StateSet in;
  StateSet out;
  BlockTiming timing;
  bool widened = false;
  std::string contention_trace;
};

struct AnalysisResult {
  std::vector<BlockResult> blocks;  ///< indexed like Cfg::blocks
  std::map<std::pair<int, int>, std::size_t> states_per_edge;
  /// Event name -> longest lifetime seen, in instructions.
  std::map<std::string, std::uint32_t> event_lifetime;
  std::size_t iterations = 0;
  bool pessimized = false;
  bool widened = false;
};

class Analyzer {
 public:
  Analyzer(XddStore& store, const Cfg& cfg, const PipelineSpec& spec, AnalysisOptions opts = {});

  AnalysisResult run();

  const PipelineModel& model() const { return model_; }
  const EventMap& events() const { return events_; }
  const Cfg& cfg() const { return cfg_; }
  const BlockEngine& engine(int block) const { return engines_.at(static_cast<std::size_t>(block)); }

  StateVector initial_state() const;

  struct Transfer {
    Xdd time;  ///< time pointer before rebasing
    StateVector out;
  };
  Transfer transfer(int block, const StateVector& in, ContentionTrace* trace = nullptr,
                    const BlockEngine::Observer& observe = {}) const;
  /// Generation bump on back edges, identity elsewhere.
  StateVector along_edge(int src, int dst, const StateVector& out, bool* pessimized = nullptr) const;
  bool is_back_edge(int src, int dst) const;
  /// Whether events of `base` belong to the loop headed by `header`.
  bool in_loop(int header, std::uint32_t base) const;

 private:
  XddStore* store_;
  Cfg cfg_;
  PipelineModel model_;
  AnalysisOptions opts_;
  EventMap events_;
  std::vector<EventAccess> inventory_;
  std::vector<BlockEngine> engines_;
  std::vector<std::pair<int, int>> back_edges_;
  std::map<int, std::vector<bool>> loop_bases_;  // header -> base membership
  std::vector<std::uint32_t> feasible_gen_;        // base -> largest generation on bounded paths
  Eigen::Index floor_slot_ = 0;
};

}  // namespace xddpipe

#endif  // XDDPIPE_ANALYSIS_HPP
