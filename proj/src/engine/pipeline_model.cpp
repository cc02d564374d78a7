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

#include "xddpipe/pipeline_model.hpp"

#include <sstream>
#include <stdexcept>

#include "xddpipe/errors.hpp"

namespace xddpipe {

EventMap register_events(XddStore& store, const Cfg& cfg) {
  EventMap m;
  for (const EventAccess& a : event_inventory(cfg)) m.bases.push_back(store.new_event_base(a.name));
  return m;
}

namespace {

// Slot and resource naming shared by build_layout and PipelineModel.
struct LayoutBuilder {
  std::vector<Slot> slots;
  std::vector<Resource> resources;

  int add(const std::string& name, ResourceKind kind, int n, TimingPoint point) {
    Resource r{name, kind, {}};
    for (int i = 0; i < n; ++i) {
      r.slots.push_back(static_cast<Eigen::Index>(slots.size()));
      slots.push_back({n == 1 && kind != ResourceKind::kFifo ? name : name + "[" + std::to_string(i) + "]", point});
    }
    resources.push_back(std::move(r));
    return static_cast<int>(resources.size()) - 1;
  }
};

}  // namespace

PipelineModel::PipelineModel(XddStore& store, PipelineSpec spec) : store_(&store), spec_(std::move(spec)) {
  validate(spec_);
  LayoutBuilder b;
  const int n = stage_count();
  queue_after_.assign(static_cast<std::size_t>(n), -1);
  pipeline_order_.assign(static_cast<std::size_t>(n), -1);
  program_order_.resize(static_cast<std::size_t>(n));
  capacity_order_.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const StageSpec& st = spec_.stages[static_cast<std::size_t>(k)];
    auto units = spec_.units_of(k);
    if (units.empty()) {
      program_order_[static_cast<std::size_t>(k)].push_back(
          b.add("PO." + st.name, ResourceKind::kSingle, 1, TimingPoint::kStart));
      capacity_order_[static_cast<std::size_t>(k)].push_back(
          b.add("CO." + st.name, ResourceKind::kFifo, st.width, TimingPoint::kEnd));
    } else {
      for (int u : units) {
        const FunctionalUnitSpec& fu = spec_.functional_units[static_cast<std::size_t>(u)];
        program_order_[static_cast<std::size_t>(k)].push_back(
            b.add("PO." + st.name + "." + fu.name, ResourceKind::kSingle, 1, TimingPoint::kStart));
        capacity_order_[static_cast<std::size_t>(k)].push_back(
            b.add("CO." + st.name + "." + fu.name, ResourceKind::kFifo, fu.count, TimingPoint::kEnd));
      }
    }
    if (k + 1 < n)
      pipeline_order_[static_cast<std::size_t>(k)] = b.add("PL." + st.name, ResourceKind::kSingle, 1, TimingPoint::kEnd);
    if (int cap = spec_.queue_after(k); cap > 0)
      queue_after_[static_cast<std::size_t>(k)] = b.add("Q." + st.name, ResourceKind::kFifo, cap, TimingPoint::kStart);
  }
  fetch_order_ = b.add("FetchOrder", ResourceKind::kFetchOrder, 1, TimingPoint::kEnd);
  mem_load_ = b.add("MemLoad", ResourceKind::kMemoryOrder, 1, TimingPoint::kEnd);
  mem_store_ = b.add("MemStore", ResourceKind::kMemoryOrder, 1, TimingPoint::kEnd);
  for (int r = 0; r < spec_.register_count; ++r)
    registers_.push_back(b.add("R" + std::to_string(r), ResourceKind::kRegister, 1, TimingPoint::kEnd));
  b.slots.push_back({"rho", TimingPoint::kPointer});
  layout_ = std::make_shared<const SlotLayout>(b.slots);
  resources_ = std::move(b.resources);
}

LayoutPtr build_layout(const PipelineSpec& p) {
  XddStore scratch;
  return PipelineModel(scratch, p).layout();
}

int PipelineModel::resource_index(const std::string& name) const {
  for (std::size_t i = 0; i < resources_.size(); ++i)
    if (resources_[i].name == name) return static_cast<int>(i);
  throw std::out_of_range("unknown resource " + name);
}

Xdd PipelineModel::access_latency(int base, Access a, std::optional<std::uint32_t> event,
                                  const EventMap& events) const {
  switch (a) {
    case Access::kAlwaysHit:
      return store_->leaf(base);
    case Access::kAlwaysMiss:
      return store_->leaf(spec_.miss_latency);
    case Access::kNotClassified:
      break;
  }
  if (!event) throw InvariantViolation("NC access without an event");
  return store_->node(events.id(*event), store_->leaf(base), store_->leaf(spec_.miss_latency));
}

StepProgram PipelineModel::gen_steps(const InstructionDescriptor& instr, int k,
                                     const EventMap& events) const {
  if (k < 0 || k >= stage_count()) throw std::out_of_range("stage index " + std::to_string(k));
  const auto ks = static_cast<std::size_t>(k);
  const bool at_fetch = k == spec_.stage_index(spec_.fetch_stage);
  const bool at_memory = k == spec_.stage_index(spec_.memory_stage) && is_memory(instr.cls);
  std::size_t lane = 0;
  if (int u = spec_.unit_for(k, instr.cls); u >= 0) {
    auto units = spec_.units_of(k);
    while (units[lane] != u) ++lane;
  }
  const int po = program_order_[ks][lane];
  const int co = capacity_order_[ks][lane];

  StepProgram sp;
  sp.stage = k;
  auto& st = sp.steps;
  st.push_back(Step::wait(po));
  st.push_back(Step::wait(co));
  if (k > 0) st.push_back(Step::wait(pipeline_order_[ks - 1]));
  if (queue_after_[ks] >= 0) st.push_back(Step::wait(queue_after_[ks]));
  if (at_fetch) st.push_back(Step::wait(fetch_order_));
  if (at_memory) {
    st.push_back(Step::wait(mem_load_));
    st.push_back(Step::wait(mem_store_));
  }
  if (k == spec_.read_stage_for(instr.cls))
    for (int r : instr.reads) st.push_back(Step::wait(registers_.at(static_cast<std::size_t>(r))));
  sp.wait_count = st.size();

  if (at_fetch && instr.fetch_uses_bus()) {
    BusRequest req{AccessKind::kFetch, instr.fetch, std::nullopt};
    if (instr.fetch_event) req.event = events.id(*instr.fetch_event);
    sp.bus = req;
  } else if (at_memory && instr.data_uses_bus()) {
    BusRequest req{AccessKind::kData, *instr.data, std::nullopt};
    if (instr.data_event) req.event = events.id(*instr.data_event);
    sp.bus = req;
  }

  st.push_back(Step::release(po));
  if (k > 0 && queue_after_[ks - 1] >= 0) st.push_back(Step::release(queue_after_[ks - 1]));

  int base = spec_.latency(k, instr.cls);
  if (at_fetch)
    st.push_back(Step::consume(access_latency(base, instr.fetch, instr.fetch_event, events)));
  else if (at_memory)
    st.push_back(Step::consume(access_latency(base, *instr.data, instr.data_event, events)));
  else
    st.push_back(Step::consume(store_->leaf(base)));

  if (pipeline_order_[ks] >= 0) st.push_back(Step::release(pipeline_order_[ks]));
  st.push_back(Step::release(co));
  if (at_fetch && instr.fetch_uses_bus()) st.push_back(Step::release(fetch_order_));
  if (at_memory) st.push_back(Step::release(instr.cls == InstrClass::kLoad ? mem_load_ : mem_store_));
  if (k == spec_.write_stage_for(instr.cls))
    for (int r : instr.writes) st.push_back(Step::release(registers_.at(static_cast<std::size_t>(r))));
  return sp;
}

std::vector<StepProgram> PipelineModel::gen_block(const std::vector<InstructionDescriptor>& instrs,
                                                  const EventMap& events) const {
  std::vector<StepProgram> out;
  for (std::size_t i = 0; i < instrs.size(); ++i)
    for (int k = 0; k < stage_count(); ++k) {
      out.push_back(gen_steps(instrs[i], k, events));
      out.back().instr = static_cast<int>(i);
    }
  return out;
}

void check_shape(const StepProgram& sp) {
  // 0: waits, 1: start releases, 2: after consume
  int phase = 0;
  for (const Step& s : sp.steps) {
    switch (s.kind) {
      case Step::Kind::kWait:
        if (phase != 0) throw InvariantViolation("WAIT after a RELEASE or CONSUME");
        break;
      case Step::Kind::kRelease:
        if (phase == 0) phase = 1;
        break;
      case Step::Kind::kConsume:
        if (phase == 2) throw InvariantViolation("two CONSUME steps");
        if (s.latency.is_null() || any_leaf(s.latency, [](ExtTime t) { return t < ExtTime(0); }))
          throw InvariantViolation("CONSUME latency must be non-negative");
        phase = 2;
        break;
    }
  }
  if (phase != 2) throw InvariantViolation("step program without CONSUME");
  std::size_t waits = 0;
  while (waits < sp.steps.size() && sp.steps[waits].kind == Step::Kind::kWait) ++waits;
  if (waits != sp.wait_count) throw InvariantViolation("wait_count disagrees with the steps");
}

std::vector<StepSpan> whole_programs(const std::vector<StepProgram>& programs, std::size_t first,
                                     std::size_t last) {
  std::vector<StepSpan> out;
  for (std::size_t i = first; i < last; ++i) out.push_back({&programs[i], 0, programs[i].steps.size(), true});
  return out;
}

TransitionMatrix compile_steps(const StepProgram& sp, const PipelineModel& model) {
  XddStore& store = model.store();
  const LayoutPtr& layout = model.layout();
  const Eigen::Index rho = layout->rho();
  TransitionMatrix m = m_reset(store, layout);
  for (const Step& s : sp.steps) {
    switch (s.kind) {
      case Step::Kind::kWait:
        m = mat_mul(m, m_wait(store, layout, model.resources().at(static_cast<std::size_t>(s.resource)).oldest()));
        break;
      case Step::Kind::kRelease: {
        const auto& slots = model.resources().at(static_cast<std::size_t>(s.resource)).slots;
        for (std::size_t j = slots.size() - 1; j > 0; --j) m = mat_mul(m, m_move(store, layout, slots[j - 1], slots[j]));
        m = mat_mul(m, m_move(store, layout, rho, slots[0]));
        break;
      }
      case Step::Kind::kConsume:
        m = mat_mul(m, m_consume(store, layout, s.latency));
        break;
    }
  }
  return m;
}

namespace {

// Right-multiplies `m` by the elementary matrices of one span.
void fold_span(SemiringMatrix<Xdd>& m, const StepSpan& span, const PipelineModel& model) {
  XddStore& store = model.store();
  const Eigen::Index rho = model.layout()->rho();
  if (span.reset) m.col(rho).fill(store.zero());
  for (std::size_t i = span.from; i < span.to; ++i) {
    const Step& s = span.program->steps[i];
    switch (s.kind) {
      case Step::Kind::kWait: {
        Eigen::Index x = model.resources()[static_cast<std::size_t>(s.resource)].oldest();
        for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, rho) = oplus(m(r, rho), m(r, x));
        break;
      }
      case Step::Kind::kRelease: {
        const auto& slots = model.resources()[static_cast<std::size_t>(s.resource)].slots;
        for (std::size_t j = slots.size() - 1; j > 0; --j) m.col(slots[j]) = m.col(slots[j - 1]);
        m.col(slots[0]) = m.col(rho);
        break;
      }
      case Step::Kind::kConsume:
        for (Eigen::Index r = 0; r < m.rows(); ++r)
          if (!(m(r, rho) == store.zero())) m(r, rho) = otimes(m(r, rho), s.latency);
        break;
    }
  }
}

}  // namespace

TransitionMatrix compile_spans(const std::vector<StepSpan>& spans, const PipelineModel& model) {
  TransitionMatrix out = identity(model.store(), model.layout());
  for (const StepSpan& span : spans) fold_span(out.matrix(), span, model);
  return out;
}

TransitionMatrix compile_block(const std::vector<StepProgram>& programs, const PipelineModel& model) {
  return compile_spans(whole_programs(programs, 0, programs.size()), model);
}

namespace {

// The transitions, applied literally to a vector.
void tau_reset(StateVector& s) { s.rho() = otimes(s.rho(), s.rho().store().zero()); }
void tau_wait(Eigen::Index x, StateVector& s) { s.rho() = oplus(s.rho(), s[x]); }
void tau_move(Eigen::Index dest, Eigen::Index src, StateVector& s) { s[dest] = s[src]; }
void tau_consume(Xdd lambda, StateVector& s) { s.rho() = otimes(s.rho(), lambda); }

void run_span(const StepSpan& span, const PipelineModel& model, StateVector& s) {
  if (span.reset) tau_reset(s);
  for (std::size_t i = span.from; i < span.to; ++i) {
    const Step& st = span.program->steps[i];
    if (st.kind == Step::Kind::kConsume) {
      tau_consume(st.latency, s);
      continue;
    }
    const Resource& r = model.resources().at(static_cast<std::size_t>(st.resource));
    if (st.kind == Step::Kind::kWait) {
      tau_wait(r.oldest(), s);
    } else {
      for (std::size_t j = r.slots.size() - 1; j > 0; --j) tau_move(r.slots[j], r.slots[j - 1], s);
      tau_move(r.slots[0], s.layout()->rho(), s);
    }
  }
}

}  // namespace

StateVector interpret(const StepProgram& sp, const PipelineModel& model, StateVector s) {
  require_same_layout(s.layout(), model.layout());
  run_span({&sp, 0, sp.steps.size(), true}, model, s);
  return s;
}

StateVector interpret(const std::vector<StepProgram>& programs, const PipelineModel& model,
                      StateVector s) {
  return interpret_spans(whole_programs(programs, 0, programs.size()), model, std::move(s));
}

StateVector interpret_spans(const std::vector<StepSpan>& spans, const PipelineModel& model,
                            StateVector s) {
  require_same_layout(s.layout(), model.layout());
  for (const StepSpan& span : spans) run_span(span, model, s);
  return s;
}

std::string to_text(const StepProgram& sp, const PipelineModel& model) {
  std::ostringstream os;
  for (std::size_t i = 0; i < sp.steps.size(); ++i) {
    if (i == sp.wait_count && sp.bus) os << "BUS(" << (sp.bus->kind == AccessKind::kFetch ? "fetch" : "data") << ");\n";
    const Step& s = sp.steps[i];
    switch (s.kind) {
      case Step::Kind::kWait:
        os << "WAIT(" << model.resources()[static_cast<std::size_t>(s.resource)].name << ");\n";
        break;
      case Step::Kind::kRelease:
        os << "RELEASE(" << model.resources()[static_cast<std::size_t>(s.resource)].name << ");\n";
        break;
      case Step::Kind::kConsume:
        os << "CONSUME(" << to_text(s.latency) << ");\n";
        break;
    }
  }
  return os.str();
}

}  // namespace xddpipe
