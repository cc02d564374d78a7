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

#include "xddpipe/contention.hpp"

#include <sstream>
#include <stdexcept>

#include "xddpipe/errors.hpp"

namespace xddpipe {

namespace {

// a..z, then aa, ab, ...
std::string label(std::size_t n) {
  std::string out;
  ++n;
  while (n > 0) {
    --n;
    out.insert(out.begin(), static_cast<char>('a' + n % 26));
    n /= 26;
  }
  return out;
}

class Recorder {
 public:
  explicit Recorder(ContentionTrace* t) : trace_(t) {}
  void add(Xdd f) {
    if (trace_) trace_->entries.emplace_back(label(next_), f);
    ++next_;
  }

 private:
  ContentionTrace* trace_;
  std::size_t next_ = 0;
};

bool uses_bus(const StepProgram& sp, AccessKind kind) { return sp.bus && sp.bus->kind == kind; }

}  // namespace

int contention_window(const PipelineSpec& p) {
  if (p.contention_window) return *p.contention_window;
  int fe = p.stage_index(p.fetch_stage);
  int me = p.stage_index(p.memory_stage);
  int w = 0;
  for (int k = fe; k < me; ++k) {
    w += p.queue_after(k);
    if (k > fe) w += p.stages[static_cast<std::size_t>(k)].width;
  }
  return w;
}

BusAccessInfo bus_info(const BusRequest& r) {
  if (r.access == Access::kAlwaysHit) throw InvariantViolation("bus request for an always-hit access");
  BusAccessInfo b;
  b.must_use_bus = r.access == Access::kAlwaysMiss;
  if (!b.must_use_bus) {
    if (!r.event) throw InvariantViolation("unclassified access without an event");
    b.event = r.event;
  }
  return b;
}

Xdd ContentionTrace::get(const std::string& l) const {
  for (const auto& [name, f] : entries)
    if (name == l) return f;
  throw std::out_of_range("no trace entry " + l);
}

std::string ContentionTrace::to_text() const {
  std::ostringstream os;
  for (const auto& [name, f] : entries) os << "(" << name << ") " << xddpipe::to_text(f) << "\n";
  return os.str();
}

ContentionResult schedule(XddStore& store, Xdd rho_me0, const BusAccessInfo& me,
                          const std::vector<BusAccessInfo>& fes, const ReadyFn& ready,
                          int lambda_bus, ContentionTrace* trace) {
  Recorder rec(trace);
  const Xdd lambda = store.leaf(ExtTime(lambda_bus));
  // Off-bus configurations never get scheduled inside the loop; they are
  // dropped to -inf after it.
  if (!me.must_use_bus) rho_me0 = otimes(rho_me0, store.node(*me.event, store.pos_inf(), store.one()));
  rec.add(rho_me0);

  Xdd hat_me = store.pos_inf();
  Xdd rel = store.zero();
  rec.add(hat_me);
  rec.add(rel);

  ContentionResult out;
  out.rho_hat_fe.reserve(fes.size());
  Xdd grant;
  std::size_t i = 0;
  auto pending = [&] { return any_leaf(hat_me, [](ExtTime t) { return t.is_pos_inf(); }); };
  for (; i < fes.size() && pending(); ++i) {
    Xdd fe = ready(i, grant);
    if (!fes[i].must_use_bus) fe = otimes(fe, store.node(*fes[i].event, store.zero(), store.one()));
    rec.add(fe);
    Xdd sched_m = oplus(sched_me(rho_me0, fe), rel);
    rec.add(sched_m);
    hat_me = ominus(hat_me, sched_m);
    rec.add(hat_me);
    Xdd sched_f = sched_fe(fe, rho_me0);
    rec.add(sched_f);
    rel = oplus(rel, otimes(sched_f, lambda));
    rec.add(rel);
    grant = ominus(sched_f, otimes(hat_me, lambda));
    rec.add(grant);
    out.rho_hat_fe.push_back(grant);
  }
  out.processed = i;
  hat_me = ominus(hat_me, oplus(rel, rho_me0));
  if (!me.must_use_bus) hat_me = otimes(hat_me, store.node(*me.event, store.zero(), store.one()));
  rec.add(hat_me);
  if (any_leaf(hat_me, [](ExtTime t) { return t.is_pos_inf(); }))
    throw InvariantViolation("memory access left unscheduled");

  // Whatever was not visited comes after the memory access.
  const Xdd after = otimes(hat_me, lambda);
  for (; i < fes.size(); ++i) {
    Xdd g = after;
    if (!fes[i].must_use_bus) g = otimes(g, store.node(*fes[i].event, store.zero(), store.one()));
    out.rho_hat_fe.push_back(g);
  }
  out.rho_hat_me0 = hat_me;
  return out;
}

std::vector<ContentionWindow> find_contention_points(const std::vector<StepProgram>& programs,
                                                     const PipelineModel& model, int window) {
  std::vector<ContentionWindow> out;
  const auto& res = model.resources();
  const std::size_t rho = static_cast<std::size_t>(model.layout()->rho());
  for (std::size_t m = 0; m < programs.size(); ++m) {
    if (!uses_bus(programs[m], AccessKind::kData)) continue;
    ContentionWindow w;
    w.me = m;
    // Slots whose value depends on the memory access's start.
    std::vector<bool> taint(static_cast<std::size_t>(model.layout()->size()), false);
    taint[rho] = true;
    auto run = [&](const StepProgram& sp, std::size_t from, std::size_t to) {
      for (std::size_t s = from; s < to; ++s) {
        const Step& st = sp.steps[s];
        if (st.kind == Step::Kind::kConsume) continue;
        const Resource& r = res.at(static_cast<std::size_t>(st.resource));
        if (st.kind == Step::Kind::kWait) {
          if (taint[static_cast<std::size_t>(r.oldest())]) taint[rho] = true;
        } else {
          for (std::size_t j = r.slots.size() - 1; j > 0; --j)
            taint[static_cast<std::size_t>(r.slots[j])] = taint[static_cast<std::size_t>(r.slots[j - 1])];
          taint[static_cast<std::size_t>(r.slots[0])] = taint[rho];
        }
      }
    };
    run(programs[m], programs[m].wait_count, programs[m].steps.size());
    for (std::size_t k = m + 1; k < programs.size(); ++k) {
      const StepProgram& sp = programs[k];
      if (uses_bus(sp, AccessKind::kData)) break;
      if (sp.instr - programs[m].instr > window) break;
      taint[rho] = false;
      run(sp, 0, sp.wait_count);
      if (uses_bus(sp, AccessKind::kFetch)) {
        if (taint[rho]) break;
        w.fes.push_back(k);
      }
      run(sp, sp.wait_count, sp.steps.size());
    }
    if (!w.fes.empty()) out.push_back(std::move(w));
  }
  return out;
}

std::vector<StepSpan> spans_between_cuts(const std::vector<StepProgram>& programs,
                                         std::optional<std::size_t> from,
                                         std::optional<std::size_t> to) {
  std::vector<StepSpan> spans;
  std::size_t first = 0;
  if (from) {
    const StepProgram& sp = programs.at(*from);
    spans.push_back({&sp, sp.wait_count, sp.steps.size(), false});
    first = *from + 1;
  }
  const std::size_t last = to ? *to : programs.size();
  if (last < first) throw std::invalid_argument("cuts out of order");
  for (std::size_t k = first; k < last; ++k) spans.push_back({&programs[k], 0, programs[k].steps.size(), true});
  if (to) {
    const StepProgram& sp = programs.at(*to);
    spans.push_back({&sp, 0, sp.wait_count, true});
  }
  return spans;
}

ContentionSequence make_sequence(const std::vector<StepProgram>& programs, const ContentionWindow& w,
                                 const PipelineModel& model) {
  ContentionSequence seq;
  seq.window = w;
  seq.me = bus_info(*programs.at(w.me).bus);
  std::size_t prev = w.me;
  for (std::size_t k : w.fes) {
    seq.fes.push_back(bus_info(*programs.at(k).bus));
    seq.bridges.push_back(compile_spans(spans_between_cuts(programs, prev, k), model));
    prev = k;
  }
  return seq;
}

ContentionResult schedule(const ContentionSequence& seq, const StateVector& s0, int lambda_bus,
                          ContentionTrace* trace) {
  StateVector s = s0;
  XddStore& store = s0.rho().store();
  auto ready = [&](std::size_t i, Xdd previous_grant) {
    if (i > 0) s.rho() = oplus(s.rho(), previous_grant);
    s = vec_mat(s, seq.bridges.at(i));
    return s.rho();
  };
  return schedule(store, s0.rho(), seq.me, seq.fes, ready, lambda_bus, trace);
}

}  // namespace xddpipe
