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

// Shared-bus scheduling of one memory-stage access against the fetches
// that follow it (first come first served, memory stage wins ties).

#ifndef XDDPIPE_CONTENTION_HPP
#define XDDPIPE_CONTENTION_HPP

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "xddpipe/pipeline_model.hpp"

namespace xddpipe {

/// Default: queue capacities from the fetch stage up to the memory stage
/// plus the widths of the stages strictly between them. The pipeline's
/// `contention_window` overrides it.
int contention_window(const PipelineSpec& p);

struct BusAccessInfo {
  bool must_use_bus = true;      ///< AM
  std::optional<EventId> event;  ///< NC: the bus is used when the event is active
};

BusAccessInfo bus_info(const BusRequest& r);

/// Labelled intermediate diagrams, "a" to "p" for two contenders.
struct ContentionTrace {
  std::vector<std::pair<std::string, Xdd>> entries;
  Xdd get(const std::string& label) const;
  std::string to_text() const;
};

struct ContentionResult {
  Xdd rho_hat_me0;
  std::vector<Xdd> rho_hat_fe;  ///< one per contender
  std::size_t processed = 0;    ///< contenders visited before the early exit
};

/// Ready time (before masking) of contender `i`, given the grant of
/// contender i-1 (null for i = 0). Called once per processed contender,
/// in order.
using ReadyFn = std::function<Xdd(std::size_t i, Xdd previous_grant)>;

/// The contention computation on bare ready times.
ContentionResult schedule(XddStore& store, Xdd rho_me0, const BusAccessInfo& me,
                          const std::vector<BusAccessInfo>& fes, const ReadyFn& ready,
                          int lambda_bus, ContentionTrace* trace = nullptr);

/// Vertices of one window, as indices into a block's program list.
struct ContentionWindow {
  std::size_t me = 0;
  std::vector<std::size_t> fes;
};

/// Windows of one block: each bus-capable memory access paired with the
/// following bus-capable fetches that do not depend on it, up to the next
/// bus-capable memory access and at most `window` instructions later.
/// Windows without contenders are dropped.
std::vector<ContentionWindow> find_contention_points(const std::vector<StepProgram>& programs,
                                                     const PipelineModel& model, int window);

/// Spans from the bus point of program `from` to the bus point of program
/// `to`. A missing `from` starts at the block entry, a missing `to` runs to
/// the block end.
std::vector<StepSpan> spans_between_cuts(const std::vector<StepProgram>& programs,
                                         std::optional<std::size_t> from,
                                         std::optional<std::size_t> to);

/// A window with its bridge matrices: bridges[0] runs from the memory
/// access's bus point to the first contender's, bridges[i] from contender
/// i to contender i+1.
struct ContentionSequence {
  ContentionWindow window;
  BusAccessInfo me;
  std::vector<BusAccessInfo> fes;
  std::vector<TransitionMatrix> bridges;
};

ContentionSequence make_sequence(const std::vector<StepProgram>& programs, const ContentionWindow& w,
                                 const PipelineModel& model);

/// Runs the computation with S0 the state at the memory access's bus point.
ContentionResult schedule(const ContentionSequence& seq, const StateVector& s0, int lambda_bus,
                          ContentionTrace* trace = nullptr);

}  // namespace xddpipe

#endif  // XDDPIPE_CONTENTION_HPP
