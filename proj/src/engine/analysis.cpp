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

#include "xddpipe/analysis.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "xddpipe/errors.hpp"

namespace xddpipe {

bool StateSet::insert(const StateVector& s) {
  if (index_.count(s)) return false;
  index_.emplace(s, states_.size());
  states_.push_back(s);
  return true;
}

void StateSet::require_same_base(const StateSet& other) const {
  if (base_ != other.base_) throw LayoutMismatch("state sets with different bases: " + base_ + ", " + other.base_);
}

void StateSet::clear() {
  states_.clear();
  index_.clear();
}

namespace {

bool finite_only(Xdd t) {
  return !any_leaf(t, [](ExtTime x) { return !x.is_finite(); });
}

template <typename F>
StateVector map_slots(const StateVector& s, F f) {
  StateVector out = s;
  for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = f(i, s[i]);
  return out;
}

}  // namespace

std::set<EventId> state_support(const StateVector& s) {
  std::set<EventId> out;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    for (EventId e : support(s[i])) out.insert(e);
  return out;
}

StateVector rebase(const StateVector& s, Xdd t) {
  if (!finite_only(t)) throw std::invalid_argument("rebase: base has an infinite leaf");
  return map_slots(s, [&](Eigen::Index, Xdd f) { return oslash(f, t); });
}

StateVector restore(const StateVector& s, Xdd t) {
  return map_slots(s, [&](Eigen::Index, Xdd f) { return otimes(f, t); });
}

Xdd rebase_base(Xdd rho) {
  if (any_leaf(rho, [](ExtTime x) { return x.is_pos_inf(); }))
    throw InvariantViolation("time pointer has a +inf leaf");
  if (finite_only(rho)) return rho;
  ExtTime best = ExtTime::neg_inf();
  any_leaf(rho, [&](ExtTime x) {
    if (x.is_finite() && (best.is_neg_inf() || x > best)) best = x;
    return false;
  });
  if (best.is_neg_inf()) throw InvariantViolation("time pointer has no finite leaf");
  return rho.store().leaf(best);
}

StateVector prune_below(const StateVector& s, Eigen::Index floor) {
  const Eigen::Index rho = s.layout()->rho();
  Xdd f = s[floor];
  return map_slots(s, [&](Eigen::Index i, Xdd v) { return i == rho ? v : drop_below(v, f); });
}

StateVector bump_generation(const StateVector& s, const std::function<bool(std::uint32_t)>& in_loop,
                            std::uint32_t max_gen, bool* pessimized) {
  return bump_generation(s, in_loop, [max_gen](std::uint32_t) { return max_gen; }, max_gen, pessimized);
}

StateVector bump_generation(const StateVector& s, const std::function<bool(std::uint32_t)>& in_loop,
                            const std::function<std::uint32_t(std::uint32_t)>& cap, std::uint32_t max_gen,
                            bool* pessimized) {
  XddStore& store = s.rho().store();
  auto at_cap = [&](EventId e) { return in_loop(e.base) && e.generation >= std::min(cap(e.base), max_gen); };
  auto rename = [&](EventId e) { return in_loop(e.base) ? EventId{e.base, e.generation + 1} : e; };
  return map_slots(s, [&](Eigen::Index, Xdd f) {
    std::vector<EventId> sup = support(f);
    if (sup.empty()) return f;
    bool folded = false, lossy = false;
    for (EventId e : sup) {
      if (!at_cap(e)) continue;
      folded = true;
      lossy = lossy || e.generation >= max_gen;
    }
    if (folded) {
      f = store.eliminate(f, at_cap);
      if (lossy && pessimized) *pessimized = true;
    }
    return store.relabel(f, rename);
  });
}

// --- BlockEngine -----------------------------------------------------------

BlockEngine::BlockEngine(const PipelineModel& model, std::vector<StepProgram> programs, int window,
                         bool use_matrices)
    : model_(&model), programs_(std::move(programs)), use_matrices_(use_matrices) {
  windows_ = find_contention_points(programs_, model, window);
  for (const ContentionWindow& w : windows_) {
    cuts_.push_back(w.me);
    cuts_.insert(cuts_.end(), w.fes.begin(), w.fes.end());
  }
  for (std::size_t k = 0; k <= cuts_.size(); ++k) {
    std::optional<std::size_t> from, to;
    if (k > 0) from = cuts_[k - 1];
    if (k < cuts_.size()) to = cuts_[k];
    spans_.push_back(spans_between_cuts(programs_, from, to));
    if (use_matrices_) matrices_.push_back(compile_spans(spans_.back(), model));
  }
}

StateVector BlockEngine::run_segment(StateVector s, std::size_t k) const {
  if (use_matrices_) return vec_mat(s, matrices_[k]);
  return interpret_spans(spans_[k], *model_, std::move(s));
}

StateVector BlockEngine::apply(StateVector s, ContentionTrace* trace, const Observer& observe) const {
  XddStore& store = model_->store();
  const int lambda = model_->spec().bus_latency;
  auto seen = [&](std::size_t k, const StateVector& v) {
    if (!observe) return;
    int at = k < cuts_.size() ? programs_[cuts_[k]].instr
                              : (programs_.empty() ? -1 : programs_.back().instr);
    observe(at, v);
  };
  s = run_segment(std::move(s), 0);
  seen(0, s);
  std::size_t seg = 1;
  for (const ContentionWindow& w : windows_) {
    const std::size_t first = seg;
    const BusAccessInfo me = bus_info(*programs_[w.me].bus);
    std::vector<BusAccessInfo> fes;
    for (std::size_t k : w.fes) fes.push_back(bus_info(*programs_[k].bus));

    StateVector cur = s;
    ReadyFn ready = [&](std::size_t i, Xdd previous_grant) {
      if (i > 0) cur.rho() = oplus(cur.rho(), previous_grant);
      cur = run_segment(std::move(cur), first + i);
      return cur.rho();
    };
    ContentionResult r = schedule(store, s.rho(), me, fes, ready, lambda, trace);

    s.rho() = oplus(s.rho(), r.rho_hat_me0);
    for (std::size_t i = 0; i < fes.size(); ++i) {
      s = run_segment(std::move(s), first + i);
      s.rho() = oplus(s.rho(), r.rho_hat_fe[i]);
      seen(first + i, s);
    }
    seg = first + fes.size();
    s = run_segment(std::move(s), seg);
    seen(seg, s);
    ++seg;
  }
  return s;
}

// --- Analyzer ----------------------------------------------------------------

ExtTime block_wcet(const BlockTiming& t) {
  ExtTime best = ExtTime::neg_inf();
  for (Xdd f : t.time) {
    if (any_leaf(f, [](ExtTime x) { return x.is_pos_inf(); }))
      throw InvariantViolation("block " + t.block + ": unscheduled time");
    ExtTime m = max_leaf(f);
    if (m > best) best = m;
  }
  return best;
}

Analyzer::Analyzer(XddStore& store, const Cfg& cfg, const PipelineSpec& spec, AnalysisOptions opts)
    : store_(&store), cfg_(cfg), model_(store, spec), opts_(opts) {
  if (opts_.max_states < 1 || opts_.max_gen < 1) throw std::invalid_argument("caps must be at least 1");
  events_ = register_events(store, cfg_);
  inventory_ = event_inventory(cfg_);
  const int window = contention_window(spec);
  for (const BasicBlock& b : cfg_.blocks)
    engines_.emplace_back(model_, model_.gen_block(b.instructions, events_), window, opts_.use_matrices);
  back_edges_ = cfg_.back_edges();
  for (const auto& [src, h] : back_edges_) {
    if (loop_bases_.count(h)) continue;
    std::vector<int> body = cfg_.natural_loop(h);
    std::vector<bool> member(store.event_base_count(), false);
    for (std::size_t i = 0; i < inventory_.size(); ++i)
      if (std::binary_search(body.begin(), body.end(), inventory_[i].block)) member[events_.bases[i]] = true;
    loop_bases_[h] = std::move(member);
  }
  // Back edges of the loops around a block, over one bounded run of the
  // outermost one: the product of the bounds minus one.
  feasible_gen_.assign(store.event_base_count(), 0);
  for (std::size_t i = 0; i < inventory_.size(); ++i) {
    std::uint64_t prod = 1;
    for (const auto& [h, bound] : cfg_.loop_bounds) {
      std::vector<int> body = cfg_.natural_loop(h);
      if (std::binary_search(body.begin(), body.end(), inventory_[i].block))
        prod = std::min<std::uint64_t>(prod * static_cast<std::uint64_t>(std::max(bound, 1)), 1U << 30);
    }
    feasible_gen_[events_.bases[i]] = static_cast<std::uint32_t>(prod - 1);
  }
  floor_slot_ = model_.layout()->index_of("PO." + spec.stages.front().name);
}

StateVector Analyzer::initial_state() const {
  StateVector s(*store_, model_.layout());
  for (Eigen::Index i = 0; i < s.size(); ++i) s[i] = store_->one();
  return s;
}

Analyzer::Transfer Analyzer::transfer(int block, const StateVector& in, ContentionTrace* trace,
                                      const BlockEngine::Observer& observe) const {
  StateVector s = engine(block).apply(in, trace, observe);
  Transfer t{s.rho(), {}};
  StateVector out = rebase(s, rebase_base(t.time));
  t.out = opts_.prune ? prune_below(out, floor_slot_) : out;
  return t;
}

bool Analyzer::is_back_edge(int src, int dst) const {
  return std::find(back_edges_.begin(), back_edges_.end(), std::make_pair(src, dst)) != back_edges_.end();
}

bool Analyzer::in_loop(int header, std::uint32_t base) const {
  auto it = loop_bases_.find(header);
  return it != loop_bases_.end() && base < it->second.size() && it->second[base];
}

StateVector Analyzer::along_edge(int src, int dst, const StateVector& out, bool* pessimized) const {
  if (!is_back_edge(src, dst)) return out;
  const std::vector<bool>& member = loop_bases_.at(dst);
  auto in_loop = [&](std::uint32_t base) { return base < member.size() && member[base]; };
  auto cap = [&](std::uint32_t base) {
    return base < feasible_gen_.size() ? feasible_gen_[base] : opts_.max_gen;
  };
  return bump_generation(out, in_loop, cap, opts_.max_gen, pessimized);
}

AnalysisResult Analyzer::run() {
  const std::size_t n = cfg_.blocks.size();
  AnalysisResult res;
  for (const BasicBlock& b : cfg_.blocks) {
    BlockResult br{StateSet(b.id), StateSet(b.id), BlockTiming{b.id, {}, ExtTime::neg_inf()}, false, {}};
    res.blocks.push_back(std::move(br));
  }
  std::vector<std::size_t> processed(n, 0);    // in-states already transferred
  std::vector<std::size_t> propagated(n, 0);   // out-states already pushed to successors
  std::vector<std::vector<std::map<EventId, std::uint32_t>>> in_ages(n), out_ages(n);
  std::map<std::pair<int, int>, StateSet> edge_states;

  // Origin instruction of each event base.
  std::map<std::uint32_t, std::pair<int, int>> origin;  // base -> (block, instr)
  std::map<std::uint32_t, std::string> base_name;
  for (std::size_t i = 0; i < inventory_.size(); ++i) {
    origin[events_.bases[i]] = {inventory_[i].block, inventory_[i].instr};
    base_name[events_.bases[i]] = inventory_[i].name;
  }

  auto add_in = [&](int b, const StateVector& s, const std::map<EventId, std::uint32_t>& ages) {
    BlockResult& br = res.blocks[static_cast<std::size_t>(b)];
    auto& ag = in_ages[static_cast<std::size_t>(b)];
    if (br.widened) {
      StateVector joined = vec_oplus(br.in[0], s);
      if (joined == br.in[0]) return false;
      br.in.clear();
      br.in.insert(joined);
      ag.assign(1, ages);
      processed[static_cast<std::size_t>(b)] = 0;
      return true;
    }
    if (!br.in.insert(s)) return false;
    ag.push_back(ages);
    if (br.in.size() > opts_.max_states) {
      if (!opts_.widen)
        throw BudgetExceeded("block " + br.in.base() + ": more than " + std::to_string(opts_.max_states) +
                             " input states");
      StateVector joined = br.in[0];
      for (std::size_t i = 1; i < br.in.size(); ++i) joined = vec_oplus(joined, br.in[i]);
      br.in.clear();
      br.in.insert(joined);
      ag.assign(1, ages);
      br.widened = res.widened = true;
      processed[static_cast<std::size_t>(b)] = 0;
    }
    return true;
  };

  std::set<int> worklist;
  add_in(cfg_.entry, initial_state(), {});
  worklist.insert(cfg_.entry);

  while (!worklist.empty()) {
    const int b = *worklist.begin();
    worklist.erase(worklist.begin());
    const auto bi = static_cast<std::size_t>(b);
    if (++res.iterations > opts_.max_iterations)
      throw BudgetExceeded("iteration budget exhausted at block " + cfg_.blocks[bi].id);
    BlockResult& br = res.blocks[bi];
    const int n_instr = static_cast<int>(cfg_.blocks[bi].instructions.size());

    for (; processed[bi] < br.in.size(); ++processed[bi]) {
      const std::map<EventId, std::uint32_t>& entry_age = in_ages[bi][processed[bi]];
      auto age_at = [&](EventId e, int instr) -> std::uint32_t {
        auto it = entry_age.find(e);
        if (it != entry_age.end()) return it->second + static_cast<std::uint32_t>(instr + 1);
        auto o = origin.find(e.base);
        if (o == origin.end() || o->second.first != b || e.generation != 0) return 0;
        return static_cast<std::uint32_t>(std::max(0, instr - o->second.second));
      };
      auto observe = [&](int instr, const StateVector& s) {
        for (EventId e : state_support(s)) {
          std::uint32_t& l = res.event_lifetime[base_name[e.base]];
          l = std::max(l, age_at(e, instr));
        }
      };
      ContentionTrace trace;
      Transfer t = transfer(b, br.in[processed[bi]], opts_.trace_contention ? &trace : nullptr, observe);
      if (opts_.trace_contention && !trace.entries.empty()) br.contention_trace += trace.to_text();
      br.timing.time.push_back(t.time);
      ExtTime m = max_leaf(t.time);
      if (m > br.timing.worst) br.timing.worst = m;
      std::map<EventId, std::uint32_t> ages;
      for (EventId e : state_support(t.out)) ages[e] = age_at(e, n_instr - 1);
      if (br.out.insert(t.out)) out_ages[bi].push_back(std::move(ages));
    }

    for (; propagated[bi] < br.out.size(); ++propagated[bi]) {
      const StateVector& s = br.out[propagated[bi]];
      const auto& ages = out_ages[bi][propagated[bi]];
      for (int d : cfg_.successors(b)) {
        bool pess = false;
        StateVector e = along_edge(b, d, s, &pess);
        res.pessimized = res.pessimized || pess;
        std::map<EventId, std::uint32_t> moved;
        if (is_back_edge(b, d)) {
          const std::vector<bool>& member = loop_bases_.at(d);
          for (const auto& [ev, a] : ages) {
            bool in = ev.base < member.size() && member[ev.base];
            if (in && ev.generation >= std::min(opts_.max_gen, feasible_gen_[ev.base])) continue;
            moved[in ? EventId{ev.base, ev.generation + 1} : ev] = a;
          }
        } else {
          moved = ages;
        }
        auto [it, fresh] = edge_states.try_emplace({b, d}, StateSet(cfg_.blocks[bi].id));
        it->second.insert(e);
        if (add_in(d, e, moved)) worklist.insert(d);
      }
    }
  }
  for (const auto& [edge, set] : edge_states) res.states_per_edge[edge] = set.size();
  return res;
}

}  // namespace xddpipe
