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

#include <algorithm>
#include <map>
#include <queue>
#include <stdexcept>

#include "xddpipe/oracle.hpp"

namespace xddpipe::oracle {

std::vector<VertexTime> solve_xg(const ScalarXg& g) {
  const std::size_t n = g.vertices.size();
  std::vector<std::vector<const XgEdge*>> in(n);
  std::vector<std::vector<int>> out(n);
  std::vector<int> indeg(n, 0);
  for (const XgEdge& e : g.edges) {
    if (e.from < 0 || e.to < 0 || static_cast<std::size_t>(e.from) >= n || static_cast<std::size_t>(e.to) >= n)
      throw std::invalid_argument("edge out of range");
    in[static_cast<std::size_t>(e.to)].push_back(&e);
    out[static_cast<std::size_t>(e.from)].push_back(e.to);
    ++indeg[static_cast<std::size_t>(e.to)];
  }
  std::queue<int> ready;
  for (std::size_t v = 0; v < n; ++v)
    if (indeg[v] == 0) ready.push(static_cast<int>(v));
  std::vector<VertexTime> t(n);
  std::size_t done = 0;
  while (!ready.empty()) {
    const auto v = static_cast<std::size_t>(ready.front());
    ready.pop();
    ++done;
    std::int64_t start = std::max<std::int64_t>(0, g.vertices[v].floor);
    for (const XgEdge* e : in[v]) {
      const VertexTime& p = t[static_cast<std::size_t>(e->from)];
      start = std::max(start, e->solid ? p.end : p.start);
    }
    t[v] = {start, start + g.vertices[v].latency};
    for (int w : out[v])
      if (--indeg[static_cast<std::size_t>(w)] == 0) ready.push(w);
  }
  if (done != n) throw std::invalid_argument("execution graph has a cycle");
  return t;
}

namespace {

int window_size(const PipelineSpec& p) {
  if (p.contention_window) return *p.contention_window;
  const int fe = p.stage_index(p.fetch_stage);
  const int me = p.stage_index(p.memory_stage);
  int w = p.queue_after(fe);
  for (int k = fe + 1; k < me; ++k) w += p.stages[static_cast<std::size_t>(k)].width + p.queue_after(k);
  return w;
}

}  // namespace

PathGraph::PathGraph(const Cfg& cfg, const PipelineSpec& p, const std::vector<int>& blocks) : spec_(&p) {
  stages_ = static_cast<int>(p.stages.size());
  const int fe = p.stage_index(p.fetch_stage);
  const int me = p.stage_index(p.memory_stage);

  // Static access names per (block, instruction, kind).
  std::map<std::tuple<int, int, AccessKind>, std::string> names;
  for (const EventAccess& a : event_inventory(cfg)) names[{a.block, a.instr, a.kind}] = a.name;

  std::vector<int> fetch_access, data_access;
  for (std::size_t pos = 0; pos < blocks.size(); ++pos) {
    const BasicBlock& b = cfg.blocks.at(static_cast<std::size_t>(blocks[pos]));
    for (std::size_t i = 0; i < b.instructions.size(); ++i) {
      const InstructionDescriptor& d = b.instructions[i];
      const int at = static_cast<int>(instrs_.size());
      instrs_.push_back(&d);
      block_of_.push_back(static_cast<int>(pos));
      fetch_access.push_back(-1);
      data_access.push_back(-1);
      if (d.fetch == Access::kNotClassified) {
        fetch_access.back() = static_cast<int>(accesses_.size());
        accesses_.push_back({at, AccessKind::kFetch, names.at({blocks[pos], static_cast<int>(i), AccessKind::kFetch})});
      }
      if (d.data == Access::kNotClassified) {
        data_access.back() = static_cast<int>(accesses_.size());
        accesses_.push_back({at, AccessKind::kData, names.at({blocks[pos], static_cast<int>(i), AccessKind::kData})});
      }
    }
  }

  const int n = static_cast<int>(instrs_.size());
  auto vid = [&](int i, int k) { return i * stages_ + k; };
  graph_.vertices.resize(static_cast<std::size_t>(n * stages_));
  access_of_.assign(graph_.vertices.size(), -1);
  bus_capable_.assign(graph_.vertices.size(), false);
  always_miss_.assign(graph_.vertices.size(), false);
  auto edge = [&](int from, int to, bool solid) { graph_.edges.push_back({from, to, solid}); };

  for (int i = 0; i < n; ++i) {
    const InstructionDescriptor& d = *instrs_[static_cast<std::size_t>(i)];
    for (int k = 0; k < stages_; ++k) {
      const int v = vid(i, k);
      XgVertex& x = graph_.vertices[static_cast<std::size_t>(v)];
      x.instr = i;
      x.stage = k;
      x.latency = p.latency(k, d.cls);
      const bool mem_vertex = k == me && is_memory(d.cls);
      if (k == fe) {
        access_of_[v] = fetch_access[static_cast<std::size_t>(i)];
        bus_capable_[v] = d.fetch != Access::kAlwaysHit;
        always_miss_[v] = d.fetch == Access::kAlwaysMiss;
      } else if (mem_vertex && d.data) {
        access_of_[v] = data_access[static_cast<std::size_t>(i)];
        bus_capable_[v] = *d.data != Access::kAlwaysHit;
        always_miss_[v] = *d.data == Access::kAlwaysMiss;
      }
      if (always_miss_[v]) x.latency = p.miss_latency;

      // Same stage (or same unit) order and capacity.
      const int unit = p.unit_for(k, d.cls);
      int capacity = p.stages[static_cast<std::size_t>(k)].width;
      if (unit >= 0) capacity = p.functional_units[static_cast<std::size_t>(unit)].count;
      int seen = 0;
      for (int j = i - 1; j >= 0 && seen < capacity; --j) {
        if (p.unit_for(k, instrs_[static_cast<std::size_t>(j)]->cls) != unit) continue;
        ++seen;
        if (seen == 1) edge(vid(j, k), v, false);
        if (seen == capacity) edge(vid(j, k), v, true);
      }
      if (k > 0) edge(vid(i, k - 1), v, true);
      if (int q = p.queue_after(k); q > 0 && i - q >= 0 && k + 1 < stages_) edge(vid(i - q, k + 1), v, false);
      if (k == fe)
        for (int j = i - 1; j >= 0; --j)
          if (instrs_[static_cast<std::size_t>(j)]->fetch != Access::kAlwaysHit) {
            edge(vid(j, fe), v, true);
            break;
          }
      if (mem_vertex)
        for (InstrClass c : {InstrClass::kLoad, InstrClass::kStore})
          for (int j = i - 1; j >= 0; --j)
            if (instrs_[static_cast<std::size_t>(j)]->cls == c) {
              edge(vid(j, me), v, true);
              break;
            }
      if (k == p.read_stage_for(d.cls))
        for (int r : d.reads) {
          // Last writer before (i, k) in instruction-then-stage order.
          for (int j = i; j >= 0; --j) {
            const InstructionDescriptor& w = *instrs_[static_cast<std::size_t>(j)];
            const int ws = p.write_stage_for(w.cls);
            if (j == i && ws >= k) continue;
            if (std::find(w.writes.begin(), w.writes.end(), r) == w.writes.end()) continue;
            edge(vid(j, ws), v, true);
            break;
          }
        }
    }
  }

  // Bus windows, one block occurrence at a time.
  std::vector<std::vector<int>> succ(graph_.vertices.size());
  for (const XgEdge& e : graph_.edges) succ[static_cast<std::size_t>(e.from)].push_back(e.to);
  const int limit = window_size(p);
  for (int i = 0; i < n; ++i) {
    const int m = vid(i, me);
    if (!is_memory(instrs_[static_cast<std::size_t>(i)]->cls) || !bus_capable_[m]) continue;
    std::vector<bool> reach(graph_.vertices.size(), false);
    std::vector<int> stack{m};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : succ[static_cast<std::size_t>(v)])
        if (!reach[static_cast<std::size_t>(w)]) {
          reach[static_cast<std::size_t>(w)] = true;
          stack.push_back(w);
        }
    }
    Window w{m, {}};
    for (int j = i + 1; j < n && block_of_[j] == block_of_[i] && j - i <= limit; ++j) {
      const int f = vid(j, fe);
      if (bus_capable_[f]) {
        if (reach[f]) break;
        w.fes.push_back(f);
      }
      const int mj = vid(j, me);
      if (is_memory(instrs_[static_cast<std::size_t>(j)]->cls) && bus_capable_[mj]) break;
    }
    if (!w.fes.empty()) windows_.push_back(std::move(w));
  }
}

std::vector<VertexTime> PathGraph::solve(const std::vector<bool>& miss) const {
  if (miss.size() != accesses_.size()) throw std::invalid_argument("configuration size mismatch");
  ScalarXg g = graph_;
  auto uses_bus = [&](int v) {
    if (!bus_capable_[v]) return false;
    return always_miss_[v] || miss[static_cast<std::size_t>(access_of_[v])];
  };
  for (std::size_t v = 0; v < g.vertices.size(); ++v)
    if (access_of_[v] >= 0 && miss[static_cast<std::size_t>(access_of_[v])]) g.vertices[v].latency = spec_->miss_latency;

  std::vector<std::vector<const XgEdge*>> in(g.vertices.size());
  for (const XgEdge& e : g.edges) in[static_cast<std::size_t>(e.to)].push_back(&e);
  std::vector<VertexTime> t;
  // Fetch grants only feed later ready times, so this settles.
  for (std::size_t round = 0; round < g.vertices.size() + 2; ++round) {
    t = solve_xg(g);
    auto ready = [&](int v) {
      std::int64_t r = 0;
      for (const XgEdge* e : in[static_cast<std::size_t>(v)]) {
        const VertexTime& p = t[static_cast<std::size_t>(e->from)];
        r = std::max(r, e->solid ? p.end : p.start);
      }
      return r;
    };
    bool changed = false;
    for (const Window& w : windows_) {
      std::optional<std::int64_t> me;
      if (uses_bus(w.me)) me = ready(w.me);
      std::vector<BusRequester> fes;
      for (int f : w.fes) fes.push_back({ready(f), uses_bus(f)});
      BusSchedule s = simulate_contention(me, fes, spec_->bus_latency);
      auto set = [&](int v, std::int64_t floor) {
        if (g.vertices[static_cast<std::size_t>(v)].floor != floor) {
          g.vertices[static_cast<std::size_t>(v)].floor = floor;
          changed = true;
        }
      };
      set(w.me, s.me.value_or(0));
      for (std::size_t i = 0; i < w.fes.size(); ++i) set(w.fes[i], s.fes[i].value_or(0));
    }
    if (!changed) return t;
  }
  throw std::logic_error("bus grants did not settle");
}

std::int64_t PathGraph::total(const std::vector<bool>& miss) const {
  if (instrs_.empty()) return 0;
  return solve(miss).back().end;
}

}  // namespace xddpipe::oracle
